#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quint/embedding.hpp"
#include "quint/graph.hpp"
#include "quint/sketch.hpp"

namespace quint {

std::uint64_t popcount(const Sketch& s) noexcept;

/// popcount of the bitwise AND. Dimensions must match.
std::uint64_t inner_product(const Sketch& a, const Sketch& b);

/// Output of the common-neighbor estimator for one pair.
struct CnEstimate {
    double value = 0.0;             ///< raw estimate; can be slightly negative near 0
    std::uint64_t raw_overlap = 0;  ///< inner product of the two sketches
    double deg_i_hat = 0.0;
    double deg_j_hat = 0.0;

    /// max(value, 0) — the feature-pipeline view.
    double clamped() const noexcept { return value > 0.0 ? value : 0.0; }
};

/// ln(1 - c/d) / ln(1 - 1/d) with c = min(popcount, d-1). The clamp keeps the
/// estimate finite when the sketch is saturated (possible only when d was
/// chosen far below the formula). Requires d >= 2.
double estimate_degree(const Sketch& s, std::uint64_t d);

/// First-order proximity test: bit pi(j) of sketch i AND bit pi(i) of sketch j.
/// Never false when the edge exists; false-positive probability at most 2*psi/d.
bool estimate_edge(const Sketch& sig_i, const Sketch& sig_j, NodeId i, NodeId j,
                   const NodeMapper& mapper);

/// Common-neighbor estimator. Zero sketch overlap short-circuits to exactly 0;
/// otherwise inverts the expected-overlap formula
///   value = n_i + n_j - ln(D^n_i + D^n_j + overlap/d - 1) / ln(D)
/// with the log argument floored at 1/d^2 against rounding underflow.
CnEstimate estimate_common_neighbors(const Sketch& sig_i, const Sketch& sig_j,
                                     std::uint64_t d);

/// Estimate of the (i,j) entry of A^4: sum over k of the pairwise
/// common-neighbor estimates value(i,k)*value(k,j). Terms whose sketch overlap
/// is zero contribute exactly 0 and are skipped.
double estimate_power4(const EmbeddingSet& es, NodeId i, NodeId j);

/// Square, real-valued, row-major dense matrix used by the power estimators.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Full estimate of A^(2^t), t >= 1: the pairwise common-neighbor estimate
/// matrix squared t-1 times. Exact zeros propagate through the squaring.
/// Refuses graphs above the dense-matrix guard.
DenseMatrix estimate_power_2t(const EmbeddingSet& es, unsigned t);

enum class SimilarityKind { inner, cosine, l1, l2 };

/// inner = sketch inner product; cosine = inner/sqrt(|a||b|), 0 when either is
/// empty; l1 = Hamming distance; l2 = sqrt(Hamming distance).
double sketch_similarity(const Sketch& a, const Sketch& b, SimilarityKind kind);

/// Mean squared error between exact common-neighbor counts and the estimates
/// over the given pairs.
double empirical_loss(const Graph& g, const EmbeddingSet& es,
                      std::span<const EdgePair> pairs);

}  // namespace quint
