#include "quint/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "quint/embedding.hpp"
#include "quint/rng.hpp"

namespace quint {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// Deterministic chunked parallel map over [0, count).
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count < 2 * static_cast<std::size_t>(threads)) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::uint32_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

std::vector<EdgePair> sample_negative_edges(const Graph& g, std::size_t count,
                                            std::uint64_t seed) {
    const std::uint64_t n = g.node_count();
    const std::uint64_t all_pairs = n < 2 ? 0 : n * (n - 1) / 2;
    if (all_pairs < g.edge_count() + count) {
        throw ParameterError("cannot sample " + std::to_string(count) +
                             " negative edges: only " +
                             std::to_string(all_pairs - std::min<std::uint64_t>(
                                                            all_pairs, g.edge_count())) +
                             " non-edges exist");
    }
    const std::uint64_t available = all_pairs - g.edge_count();
    Rng rng(seed);
    std::vector<EdgePair> out;
    out.reserve(count);

    if (count * 3 >= available) {
        // Dense regime: enumerate every non-edge and take a random prefix.
        std::vector<EdgePair> pool;
        pool.reserve(available);
        for (NodeId u = 0; u + 1 < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) {
                if (!g.has_edge(u, v)) pool.emplace_back(u, v);
            }
        }
        rng.shuffle(pool);
        out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
        return out;
    }

    std::unordered_set<std::uint64_t> edges;
    edges.reserve(2 * g.edge_count());
    for (const auto& [u, v] : g.edges()) edges.insert(edge_key(u, v));
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(2 * count);
    while (out.size() < count) {
        const NodeId u = static_cast<NodeId>(rng.below(n));
        const NodeId v = static_cast<NodeId>(rng.below(n));
        if (u == v) continue;
        const std::uint64_t key = edge_key(u, v);
        if (edges.count(key) || !taken.insert(key).second) continue;
        out.emplace_back(std::min(u, v), std::max(u, v));
    }
    return out;
}

LinkPredSplit split_link_prediction(const Graph& g, double test_edge_fraction,
                                    std::uint64_t seed) {
    if (!(test_edge_fraction > 0.0 && test_edge_fraction < 1.0)) {
        throw ParameterError("test edge fraction must lie in (0,1)");
    }
    const std::size_t m = g.edge_count();
    const std::size_t want =
        static_cast<std::size_t>(std::llround(test_edge_fraction * static_cast<double>(m)));

    Rng rng(mix64(seed));
    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);

    // Protect a random spanning forest; only the remaining edges may be
    // removed, so no component can fall apart.
    UnionFind uf(g.node_count());
    std::vector<std::uint32_t> removable;
    removable.reserve(m);
    for (std::uint32_t idx : order) {
        const auto& [u, v] = g.edges()[idx];
        if (!uf.unite(u, v)) removable.push_back(idx);
    }
    if (removable.size() < want) {
        throw Error("cannot remove " + std::to_string(want) +
                    " edges while preserving connectivity: only " +
                    std::to_string(removable.size()) + " non-forest edges exist (deficit " +
                    std::to_string(want - removable.size()) + ")");
    }

    std::vector<bool> is_test(m, false);
    for (std::size_t r = 0; r < want; ++r) is_test[removable[r]] = true;

    LinkPredSplit split;
    split.seed = seed;
    for (std::size_t idx = 0; idx < m; ++idx) {
        (is_test[idx] ? split.pos_test : split.pos_train).push_back(g.edges()[idx]);
    }
    split.residual_graph =
        Graph::from_edges(g.node_count(), split.pos_train, g.external_ids());

    // Negatives are screened against the FULL original edge set so a removed
    // positive can never masquerade as a missing edge. As many negatives as
    // original edges, capped by the number of non-edges that exist at all.
    const std::uint64_t n = g.node_count();
    const std::uint64_t non_edges = (n < 2 ? 0 : n * (n - 1) / 2) - m;
    std::vector<EdgePair> negatives = sample_negative_edges(
        g, std::min<std::uint64_t>(m, non_edges), mix64(seed ^ 0x6e656764ULL));  // "negd"
    const std::size_t neg_test_count = static_cast<std::size_t>(
        std::llround(test_edge_fraction * static_cast<double>(negatives.size())));
    split.neg_test.assign(negatives.begin(),
                          negatives.begin() + static_cast<std::ptrdiff_t>(neg_test_count));
    split.neg_train.assign(negatives.begin() + static_cast<std::ptrdiff_t>(neg_test_count),
                           negatives.end());
    return split;
}

LabelSet load_labels(std::istream& in, const Graph& g) {
    std::unordered_map<std::uint64_t, NodeId> to_internal;
    to_internal.reserve(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) to_internal.emplace(g.external_id(u), u);

    LabelSet set;
    set.labels.assign(g.node_count(), {});
    std::unordered_map<std::uint64_t, std::uint32_t> class_ids;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::uint64_t ext;
        std::string label_field;
        if (!(ls >> ext >> label_field)) {
            throw ParseError("labels line " + std::to_string(line_no) +
                             ": expected \"node_id<TAB>label[,label...]\"");
        }
        auto it = to_internal.find(ext);
        if (it == to_internal.end()) {
            throw ParseError("labels line " + std::to_string(line_no) + ": node id " +
                             std::to_string(ext) + " is not in the graph");
        }
        std::stringstream fields(label_field);
        std::string tok;
        while (std::getline(fields, tok, ',')) {
            std::uint64_t raw;
            try {
                raw = std::stoull(tok);
            } catch (const std::exception&) {
                throw ParseError("labels line " + std::to_string(line_no) +
                                 ": label \"" + tok + "\" is not an integer");
            }
            const auto [cit, inserted] =
                class_ids.emplace(raw, static_cast<std::uint32_t>(class_ids.size()));
            auto& lst = set.labels[it->second];
            if (std::find(lst.begin(), lst.end(), cit->second) == lst.end()) {
                lst.push_back(cit->second);
            }
        }
    }
    set.num_classes = static_cast<std::uint32_t>(class_ids.size());
    for (const auto& lst : set.labels) {
        if (lst.size() > 1) {
            set.multi_label = true;
            break;
        }
    }
    return set;
}

LabelSet load_labels_file(const std::filesystem::path& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open labels file: " + path.string());
    return load_labels(in, g);
}

double logistic_loss(const FeatureMatrix& x, std::span<const int> y,
                     std::span<const double> w, double bias, double l2) {
    const std::size_t m = x.rows;
    double loss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        auto row = x.row(r);
        double z = bias;
        for (std::size_t f = 0; f < x.cols; ++f) z += w[f] * row[f];
        // log(1+exp(-z)) evaluated stably on either branch
        const double margin = y[r] ? z : -z;
        loss += margin > 0 ? std::log1p(std::exp(-margin))
                           : -margin + std::log1p(std::exp(margin));
    }
    loss /= static_cast<double>(m);
    double penalty = 0.0;
    for (double wf : w) penalty += wf * wf;
    return loss + 0.5 * l2 * penalty;
}

void logistic_gradient(const FeatureMatrix& x, std::span<const int> y,
                       std::span<const double> w, double bias, double l2,
                       std::span<double> grad_w, double& grad_b) {
    const std::size_t m = x.rows;
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        auto row = x.row(r);
        double z = bias;
        for (std::size_t f = 0; f < x.cols; ++f) z += w[f] * row[f];
        const double p = 1.0 / (1.0 + std::exp(-z));
        const double residual = p - static_cast<double>(y[r]);
        for (std::size_t f = 0; f < x.cols; ++f) grad_w[f] += residual * row[f];
        grad_b += residual;
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t f = 0; f < x.cols; ++f) {
        grad_w[f] = grad_w[f] * inv_m + l2 * w[f];  // bias stays unregularized
    }
    grad_b *= inv_m;
}

LogisticModel train_logistic(const FeatureMatrix& x, std::span<const int> y,
                             const LogisticHyper& hyper) {
    if (x.rows != y.size() || x.rows < 2) {
        throw ParameterError("training needs at least two labeled rows");
    }
    bool has0 = false, has1 = false;
    for (int v : y) (v ? has1 : has0) = true;
    if (!has0 || !has1) {
        throw ParameterError("training labels must contain both classes");
    }
    for (double v : x.a) {
        if (!std::isfinite(v)) throw ParameterError("non-finite feature value");
    }

    LogisticModel model;
    model.hyper = hyper;
    model.feature_mean.assign(x.cols, 0.0);
    model.feature_scale.assign(x.cols, 1.0);
    const double inv_m = 1.0 / static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        auto row = x.row(r);
        for (std::size_t f = 0; f < x.cols; ++f) model.feature_mean[f] += row[f];
    }
    for (double& mu : model.feature_mean) mu *= inv_m;
    std::vector<double> var(x.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        auto row = x.row(r);
        for (std::size_t f = 0; f < x.cols; ++f) {
            const double dev = row[f] - model.feature_mean[f];
            var[f] += dev * dev;
        }
    }
    for (std::size_t f = 0; f < x.cols; ++f) {
        const double sd = std::sqrt(var[f] * inv_m);
        model.feature_scale[f] = sd > 0.0 ? sd : 1.0;
    }

    FeatureMatrix xs(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        auto src = x.row(r);
        auto dst = xs.row(r);
        for (std::size_t f = 0; f < x.cols; ++f) {
            dst[f] = (src[f] - model.feature_mean[f]) / model.feature_scale[f];
        }
    }

    model.weights.assign(x.cols, 0.0);
    model.bias = 0.0;
    std::vector<double> grad(x.cols, 0.0);
    double grad_b = 0.0;
    for (unsigned epoch = 1; epoch <= hyper.epochs; ++epoch) {
        logistic_gradient(xs, y, model.weights, model.bias, hyper.l2, grad, grad_b);
        const double lr = hyper.learning_rate / std::sqrt(static_cast<double>(epoch));
        for (std::size_t f = 0; f < x.cols; ++f) model.weights[f] -= lr * grad[f];
        model.bias -= lr * grad_b;
    }
    return model;
}

double LogisticModel::predict_probability(std::span<const double> x) const {
    double z = bias;
    for (std::size_t f = 0; f < weights.size(); ++f) {
        z += weights[f] * (x[f] - feature_mean[f]) / feature_scale[f];
    }
    return 1.0 / (1.0 + std::exp(-z));
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw ParameterError("scores and labels must be non-empty and equal length");
    }
    std::size_t pos = 0;
    for (int v : labels) pos += (v != 0);
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) {
        throw ParameterError("AUC-ROC requires both classes present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum average ranks of the positives, ties sharing their mean rank.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]]) rank_sum_pos += avg_rank;
        }
        i = j + 1;
    }
    const double p = static_cast<double>(pos);
    return (rank_sum_pos - p * (p + 1.0) / 2.0) /
           (p * static_cast<double>(neg));
}

F1Scores micro_macro_f1(const LabelSet& predicted, const LabelSet& truth) {
    if (predicted.labels.size() != truth.labels.size()) {
        throw ParameterError("predicted and truth node universes differ");
    }
    if (predicted.num_classes != truth.num_classes) {
        throw ParameterError("predicted and truth class universes differ");
    }
    const std::uint32_t classes = truth.num_classes;
    std::vector<std::uint64_t> tp(classes, 0), fp(classes, 0), fn(classes, 0);
    std::vector<char> has_true(classes, 0), has_pred(classes, 0);
    for (std::size_t node = 0; node < truth.labels.size(); ++node) {
        for (std::uint32_t c : truth.labels[node]) {
            has_true[c] = 1;
            const auto& p = predicted.labels[node];
            if (std::find(p.begin(), p.end(), c) != p.end()) {
                ++tp[c];
            } else {
                ++fn[c];
            }
        }
        for (std::uint32_t c : predicted.labels[node]) {
            has_pred[c] = 1;
            const auto& t = truth.labels[node];
            if (std::find(t.begin(), t.end(), c) == t.end()) ++fp[c];
        }
    }

    std::uint64_t tp_all = 0, fp_all = 0, fn_all = 0;
    double macro_sum = 0.0;
    for (std::uint32_t c = 0; c < classes; ++c) {
        tp_all += tp[c];
        fp_all += fp[c];
        fn_all += fn[c];
        const std::uint64_t denom = 2 * tp[c] + fp[c] + fn[c];
        // Classes absent from both sides contribute 0 by convention.
        macro_sum += denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp[c]) /
                                            static_cast<double>(denom);
    }
    F1Scores f1;
    const std::uint64_t micro_denom = 2 * tp_all + fp_all + fn_all;
    f1.micro = micro_denom == 0
                   ? 0.0
                   : 2.0 * static_cast<double>(tp_all) / static_cast<double>(micro_denom);
    f1.macro = classes == 0 ? 0.0 : macro_sum / static_cast<double>(classes);
    return f1;
}

namespace {

std::uint64_t resolve_dimension(const EvalConfig& config, Sparsity psi) {
    if (config.dim && config.rho) {
        throw ParameterError("dim and rho are mutually exclusive");
    }
    if (config.dim) return *config.dim;
    if (config.rho) return compute_dimension(psi, *config.rho);
    throw ParameterError("either dim or rho must be given");
}

double uncompressed_similarity(const Graph& g, NodeId u, NodeId v, SimilarityKind kind) {
    const double cn = static_cast<double>(common_neighbors_exact(g, u, v));
    const double du = g.degree(u);
    const double dv = g.degree(v);
    switch (kind) {
        case SimilarityKind::inner:
            return cn;
        case SimilarityKind::cosine:
            return (du == 0.0 || dv == 0.0) ? 0.0 : cn / std::sqrt(du * dv);
        case SimilarityKind::l1:
            return du + dv - 2.0 * cn;  // Hamming distance of adjacency rows
        case SimilarityKind::l2:
            return std::sqrt(du + dv - 2.0 * cn);
    }
    throw ParameterError("unknown similarity kind");
}

}  // namespace

EvalReport run_link_prediction(const Graph& g, const EvalConfig& config) {
    LinkPredSplit split = split_link_prediction(g, config.test_fraction, config.seed);
    const Graph& residual = split.residual_graph;

    EvalReport report;
    report.task = "link_prediction";
    report.seed = config.seed;

    std::optional<EmbeddingSet> es;
    if (config.source == FeatureSource::quint) {
        const std::uint64_t d = resolve_dimension(config, max_degree(residual));
        const auto t0 = Clock::now();
        es = embed_graph(residual, d, config.seed, config.threads);
        report.compression_time_s = seconds_since(t0);
        if (config.rho) es->rho = *config.rho;
        report.dim = d;
    } else {
        report.dim = g.node_count();  // adjacency rows
        report.compression_time_s = 0.0;
    }

    auto featurize = [&](const std::vector<EdgePair>& pairs, FeatureMatrix& out,
                         std::vector<int>& labels, int label, std::size_t offset) {
        parallel_for(pairs.size(), config.threads, [&](std::size_t k) {
            const auto& [u, v] = pairs[k];
            double f;
            if (es) {
                if (config.similarity == SimilarityKind::inner) {
                    // EstCN is the inner-product estimate; clamp for the
                    // 1-D feature
                    f = estimate_common_neighbors(es->sketches[u], es->sketches[v], es->d)
                            .clamped();
                } else {
                    f = sketch_similarity(es->sketches[u], es->sketches[v],
                                          config.similarity);
                }
            } else {
                f = uncompressed_similarity(residual, u, v, config.similarity);
            }
            out.a[offset + k] = f;
            labels[offset + k] = label;
        });
    };

    const std::size_t train_rows = split.pos_train.size() + split.neg_train.size();
    const std::size_t test_rows = split.pos_test.size() + split.neg_test.size();
    FeatureMatrix x_train(train_rows, 1), x_test(test_rows, 1);
    std::vector<int> y_train(train_rows), y_test(test_rows);
    featurize(split.pos_train, x_train, y_train, 1, 0);
    featurize(split.neg_train, x_train, y_train, 0, split.pos_train.size());
    featurize(split.pos_test, x_test, y_test, 1, 0);
    featurize(split.neg_test, x_test, y_test, 0, split.pos_test.size());

    const auto t1 = Clock::now();
    const LogisticModel model = train_logistic(x_train, y_train, config.hyper);
    report.train_time_s = seconds_since(t1);

    std::vector<double> scores(test_rows);
    for (std::size_t r = 0; r < test_rows; ++r) {
        scores[r] = model.predict_probability(x_test.row(r));
    }
    report.metrics.emplace_back("auc_roc", auc_roc(scores, y_test));
    report.split_params = {
        {"test_fraction", config.test_fraction},
        {"pos_train", static_cast<double>(split.pos_train.size())},
        {"pos_test", static_cast<double>(split.pos_test.size())},
        {"neg_train", static_cast<double>(split.neg_train.size())},
        {"neg_test", static_cast<double>(split.neg_test.size())},
    };
    return report;
}

EvalReport run_node_classification(const Graph& g, const LabelSet& labels,
                                   const EvalConfig& config) {
    if (labels.labels.size() != g.node_count()) {
        throw ParameterError("label set does not cover the graph's node universe");
    }
    if (labels.num_classes < 2) {
        throw ParameterError("node classification needs at least two classes");
    }
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw ParameterError("train fraction must lie in (0,1)");
    }
    if (config.repeats == 0) throw ParameterError("repeats must be positive");

    std::vector<NodeId> labeled;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (!labels.labels[u].empty()) labeled.push_back(u);
    }
    if (labeled.size() < 2) throw ParameterError("need at least two labeled nodes");

    EvalReport report;
    report.task = "node_classification";
    report.seed = config.seed;

    // Feature rows for labeled nodes: d sketch bits, or n adjacency bits.
    std::size_t cols;
    std::optional<EmbeddingSet> es;
    if (config.source == FeatureSource::quint) {
        const std::uint64_t d = resolve_dimension(config, max_degree(g));
        const auto t0 = Clock::now();
        es = embed_graph(g, d, config.seed, config.threads);
        report.compression_time_s = seconds_since(t0);
        report.dim = d;
        cols = d;
    } else {
        report.dim = g.node_count();
        report.compression_time_s = 0.0;
        cols = g.node_count();
    }

    FeatureMatrix features(labeled.size(), cols);
    parallel_for(labeled.size(), config.threads, [&](std::size_t r) {
        const NodeId u = labeled[r];
        auto row = features.row(r);
        if (es) {
            for (std::size_t f = 0; f < cols; ++f) {
                row[f] = es->sketches[u].test(f) ? 1.0 : 0.0;
            }
        } else {
            for (NodeId v : g.neighbors(u)) row[v] = 1.0;
        }
    });

    double micro_sum = 0.0, macro_sum = 0.0, train_time = 0.0;
    for (unsigned rep = 0; rep < config.repeats; ++rep) {
        Rng rng(mix64(config.seed) ^ mix64(rep + 1));
        std::vector<std::size_t> order(labeled.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        const std::size_t train_count = static_cast<std::size_t>(std::llround(
            config.train_fraction * static_cast<double>(labeled.size())));
        if (train_count < 2 || train_count >= labeled.size()) {
            throw ParameterError("train fraction leaves an empty train or test side");
        }

        FeatureMatrix x_train(train_count, cols);
        for (std::size_t r = 0; r < train_count; ++r) {
            auto src = features.row(order[r]);
            std::copy(src.begin(), src.end(), x_train.row(r).begin());
        }
        const std::size_t test_count = labeled.size() - train_count;

        std::vector<std::vector<double>> prob(labels.num_classes);
        const auto t1 = Clock::now();
        parallel_for(labels.num_classes, config.threads, [&](std::size_t c) {
            std::vector<int> y(train_count);
            bool has0 = false, has1 = false;
            for (std::size_t r = 0; r < train_count; ++r) {
                const auto& lst = labels.labels[labeled[order[r]]];
                y[r] = std::find(lst.begin(), lst.end(), static_cast<std::uint32_t>(c)) !=
                       lst.end();
                (y[r] ? has1 : has0) = true;
            }
            auto& out = prob[c];
            out.assign(test_count, 0.0);
            if (!has1) return;  // class absent from train: constant 0
            if (!has0) {
                std::fill(out.begin(), out.end(), 1.0);
                return;
            }
            const LogisticModel model = train_logistic(x_train, y, config.hyper);
            for (std::size_t r = 0; r < test_count; ++r) {
                out[r] = model.predict_probability(features.row(order[train_count + r]));
            }
        });
        train_time += seconds_since(t1);

        LabelSet truth_test, pred_test;
        truth_test.num_classes = pred_test.num_classes = labels.num_classes;
        truth_test.multi_label = pred_test.multi_label = labels.multi_label;
        truth_test.labels.resize(test_count);
        pred_test.labels.resize(test_count);
        for (std::size_t r = 0; r < test_count; ++r) {
            truth_test.labels[r] = labels.labels[labeled[order[train_count + r]]];
            if (labels.multi_label) {
                for (std::uint32_t c = 0; c < labels.num_classes; ++c) {
                    if (prob[c][r] >= 0.5) pred_test.labels[r].push_back(c);
                }
            } else {
                std::uint32_t best = 0;
                for (std::uint32_t c = 1; c < labels.num_classes; ++c) {
                    if (prob[c][r] > prob[best][r]) best = c;
                }
                pred_test.labels[r].push_back(best);
            }
        }
        const F1Scores f1 = micro_macro_f1(pred_test, truth_test);
        micro_sum += f1.micro;
        macro_sum += f1.macro;
    }

    report.train_time_s = train_time;
    report.metrics.emplace_back("micro_f1", micro_sum / config.repeats);
    report.metrics.emplace_back("macro_f1", macro_sum / config.repeats);
    report.split_params = {
        {"train_fraction", config.train_fraction},
        {"repeats", static_cast<double>(config.repeats)},
        {"labeled_nodes", static_cast<double>(labeled.size())},
    };
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["task"] = task;
    j["dim"] = dim;
    j["seed"] = seed;
    nlohmann::ordered_json m;
    for (const auto& [k, v] : metrics) m[k] = v;
    j["metrics"] = m;
    j["compression_time_s"] = compression_time_s;
    j["train_time_s"] = train_time_s;
    nlohmann::ordered_json s;
    for (const auto& [k, v] : split_params) s[k] = v;
    j["split"] = s;
    return j.dump();
}

}  // namespace quint
