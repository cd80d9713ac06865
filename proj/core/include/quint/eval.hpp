#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quint/estimators.hpp"
#include "quint/graph.hpp"

namespace quint {

/// A connectivity-preserving link-prediction split. Test positives are drawn
/// only from edges outside a protected random spanning forest, so removal can
/// never disconnect a component.
struct LinkPredSplit {
    Graph residual_graph;
    std::vector<EdgePair> pos_train;
    std::vector<EdgePair> pos_test;
    std::vector<EdgePair> neg_train;
    std::vector<EdgePair> neg_test;
    std::uint64_t seed = 0;
};

/// Remove round(test_edge_fraction*|E|) random non-forest edges as test
/// positives; the rest form the residual graph and the train positives.
/// Negatives (|E| sampled non-edges, capped by the non-edges that exist,
/// checked against the FULL original edge set) are split with the same test
/// fraction. Throws when fewer removable edges exist than needed, naming the
/// deficit.
LinkPredSplit split_link_prediction(const Graph& g, double test_edge_fraction,
                                    std::uint64_t seed);

/// Uniformly sampled distinct unordered non-adjacent pairs, no self-pairs.
std::vector<EdgePair> sample_negative_edges(const Graph& g, std::size_t count,
                                            std::uint64_t seed);

/// Per-node label ids (compacted to [0,num_classes)); multi_label permits more
/// than one label per node. Unlabeled nodes carry an empty list.
struct LabelSet {
    std::vector<std::vector<std::uint32_t>> labels;
    std::uint32_t num_classes = 0;
    bool multi_label = false;
};

/// Parse "node_id<TAB>label[,label...]" lines ('#' comments allowed); node ids
/// are external ids resolved through g's id map, labels compacted in
/// first-appearance order.
LabelSet load_labels(std::istream& in, const Graph& g);
LabelSet load_labels_file(const std::filesystem::path& path, const Graph& g);

struct LogisticHyper {
    double l2 = 1e-4;
    double learning_rate = 0.1;  ///< decays as 1/sqrt(t)
    unsigned epochs = 300;
};

/// Row-major feature matrix.
struct FeatureMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    std::span<const double> row(std::size_t i) const { return {a.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {a.data() + i * cols, cols}; }
};

/// L2-regularized logistic regression fit by full-batch gradient descent on
/// standardized features. Deterministic given inputs.
struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    LogisticHyper hyper;
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;

    /// Probability of class 1 for a raw (unstandardized) feature row.
    double predict_probability(std::span<const double> x) const;
};

LogisticModel train_logistic(const FeatureMatrix& x, std::span<const int> y,
                             const LogisticHyper& hyper = {});

/// Regularized mean cross-entropy loss and its gradient at (w, b) on
/// standardized-or-not features as given. Exposed for gradient verification.
double logistic_loss(const FeatureMatrix& x, std::span<const int> y,
                     std::span<const double> w, double bias, double l2);
void logistic_gradient(const FeatureMatrix& x, std::span<const int> y,
                       std::span<const double> w, double bias, double l2,
                       std::span<double> grad_w, double& grad_b);

/// Mann-Whitney rank statistic: (#{(p,n): s_p > s_n} + ties/2) / (P*N),
/// computed by sorting. Both classes must be present.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

struct F1Scores {
    double micro = 0.0;
    double macro = 0.0;
};

/// Pooled-decision F1 and unweighted per-class-mean F1. Classes absent from
/// both truth and prediction contribute F1 = 0 to the macro mean.
F1Scores micro_macro_f1(const LabelSet& predicted, const LabelSet& truth);

enum class FeatureSource { quint, uncompressed };

struct EvalConfig {
    std::optional<std::uint64_t> dim;  ///< explicit d; exclusive with rho
    std::optional<double> rho;         ///< formula dimension when set
    std::uint64_t seed = 0;
    SimilarityKind similarity = SimilarityKind::inner;
    FeatureSource source = FeatureSource::quint;
    double test_fraction = 0.3;   ///< link prediction: fraction of edges removed
    double train_fraction = 0.7;  ///< node classification: labeled-node split
    unsigned repeats = 10;        ///< node classification split repetitions
    unsigned threads = 1;
    LogisticHyper hyper;
};

struct EvalReport {
    std::string task;
    std::uint64_t dim = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> metrics;
    double compression_time_s = 0.0;
    double train_time_s = 0.0;
    std::vector<std::pair<std::string, double>> split_params;

    /// Single structured object, suitable for stdout.
    std::string to_json() const;
};

/// Split, embed the residual graph (or use adjacency rows for uncompressed),
/// score one scalar similarity per pair, train logistic regression on the
/// train pairs and report AUC-ROC on the test pairs. compression_time_s is
/// measured around the embedding step only.
EvalReport run_link_prediction(const Graph& g, const EvalConfig& config);

/// Embed the full graph; features are the d sketch bits (or the n adjacency
/// bits). One-vs-rest logistic models per class; argmax for single-label,
/// 0.5 threshold per class for multi-label. Metrics averaged over `repeats`
/// random train/test node splits.
EvalReport run_node_classification(const Graph& g, const LabelSet& labels,
                                   const EvalConfig& config);

}  // namespace quint
