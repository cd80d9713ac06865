#include "quint/estimators.hpp"

#include <bit>
#include <cmath>

namespace quint {

namespace {

void check_same_dim(const Sketch& a, const Sketch& b) {
    if (a.dim() != b.dim()) {
        throw ParameterError("sketch dimension mismatch: " + std::to_string(a.dim()) +
                             " vs " + std::to_string(b.dim()));
    }
}

double degree_from_count(std::uint64_t c, std::uint64_t d) {
    if (c == 0) return 0.0;
    if (c >= d) c = d - 1;  // saturated sketch; keeps the log finite
    const double dd = static_cast<double>(d);
    return std::log(1.0 - static_cast<double>(c) / dd) / std::log(1.0 - 1.0 / dd);
}

}  // namespace

std::uint64_t popcount(const Sketch& s) noexcept {
    std::uint64_t count = 0;
    for (std::uint64_t w : s.words()) count += std::popcount(w);
    return count;
}

std::uint64_t inner_product(const Sketch& a, const Sketch& b) {
    check_same_dim(a, b);
    auto aw = a.words();
    auto bw = b.words();
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < aw.size(); ++i) count += std::popcount(aw[i] & bw[i]);
    return count;
}

double estimate_degree(const Sketch& s, std::uint64_t d) {
    if (d < 2) throw ParameterError("degree estimation requires dimension >= 2");
    if (s.dim() != d) {
        throw ParameterError("sketch dimension " + std::to_string(s.dim()) +
                             " does not match d = " + std::to_string(d));
    }
    return degree_from_count(popcount(s), d);
}

bool estimate_edge(const Sketch& sig_i, const Sketch& sig_j, NodeId i, NodeId j,
                   const NodeMapper& mapper) {
    check_same_dim(sig_i, sig_j);
    if (sig_i.dim() != mapper.dim()) {
        throw ParameterError("sketch dimension does not match the mapper");
    }
    return sig_i.test(mapper(j)) && sig_j.test(mapper(i));
}

CnEstimate estimate_common_neighbors(const Sketch& sig_i, const Sketch& sig_j,
                                     std::uint64_t d) {
    if (d < 2) throw ParameterError("common-neighbor estimation requires dimension >= 2");
    check_same_dim(sig_i, sig_j);
    if (sig_i.dim() != d) {
        throw ParameterError("sketch dimension " + std::to_string(sig_i.dim()) +
                             " does not match d = " + std::to_string(d));
    }

    CnEstimate est;
    est.raw_overlap = inner_product(sig_i, sig_j);

    const std::uint64_t ci = popcount(sig_i);
    const std::uint64_t cj = popcount(sig_j);
    est.deg_i_hat = degree_from_count(ci, d);
    est.deg_j_hat = degree_from_count(cj, d);
    if (est.raw_overlap == 0) {
        est.value = 0.0;  // zero sketch overlap short-circuits exactly
        return est;
    }

    const double dd = static_cast<double>(d);
    const double ln_big_d = std::log(1.0 - 1.0 / dd);
    // D^deg_hat equals 1 - c/d by construction of the degree estimate.
    const double xi = 1.0 - static_cast<double>(std::min(ci, d - 1)) / dd;
    const double xj = 1.0 - static_cast<double>(std::min(cj, d - 1)) / dd;
    double arg = xi + xj + static_cast<double>(est.raw_overlap) / dd - 1.0;
    // Rounding can push near-total overlap below zero; 1/d^2 is below every
    // value the estimator can meaningfully distinguish.
    const double floor = 1.0 / (dd * dd);
    if (arg < floor) arg = floor;
    est.value = est.deg_i_hat + est.deg_j_hat - std::log(arg) / ln_big_d;
    return est;
}

double estimate_power4(const EmbeddingSet& es, NodeId i, NodeId j) {
    const std::size_t n = es.node_count();
    if (i >= n || j >= n) throw ParameterError("node id out of range for embedding set");
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const CnEstimate ik = estimate_common_neighbors(es.sketches[i], es.sketches[k], es.d);
        if (ik.raw_overlap == 0) continue;
        const CnEstimate kj = estimate_common_neighbors(es.sketches[k], es.sketches[j], es.d);
        if (kj.raw_overlap == 0) continue;
        sum += ik.value * kj.value;
    }
    return sum;
}

DenseMatrix estimate_power_2t(const EmbeddingSet& es, unsigned t) {
    if (t < 1) throw ParameterError("power exponent t must be >= 1");
    const std::size_t n = es.node_count();
    if (n > kDenseOracleMaxNodes) {
        throw SizeError("dense estimate matrix refused: " + std::to_string(n) +
                        " nodes exceeds the guard of " +
                        std::to_string(kDenseOracleMaxNodes));
    }

    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const CnEstimate e =
                estimate_common_neighbors(es.sketches[i], es.sketches[j], es.d);
            m.at(i, j) = e.value;
            m.at(j, i) = e.value;  // the estimator is symmetric
        }
    }

    for (unsigned s = 1; s < t; ++s) {
        DenseMatrix next(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double sum = 0.0;
                // Skip exact zeros in the same order as estimate_power4 so the
                // two routes agree bit-for-bit at t = 2.
                for (std::size_t k = 0; k < n; ++k) {
                    const double a = m.at(i, k);
                    if (a == 0.0) continue;
                    const double b = m.at(k, j);
                    if (b == 0.0) continue;
                    sum += a * b;
                }
                next.at(i, j) = sum;
            }
        }
        m = std::move(next);
    }
    return m;
}

double sketch_similarity(const Sketch& a, const Sketch& b, SimilarityKind kind) {
    check_same_dim(a, b);
    switch (kind) {
        case SimilarityKind::inner:
            return static_cast<double>(inner_product(a, b));
        case SimilarityKind::cosine: {
            const std::uint64_t pa = popcount(a);
            const std::uint64_t pb = popcount(b);
            if (pa == 0 || pb == 0) return 0.0;
            return static_cast<double>(inner_product(a, b)) /
                   std::sqrt(static_cast<double>(pa) * static_cast<double>(pb));
        }
        case SimilarityKind::l1:
        case SimilarityKind::l2: {
            auto aw = a.words();
            auto bw = b.words();
            std::uint64_t hamming = 0;
            for (std::size_t i = 0; i < aw.size(); ++i) {
                hamming += std::popcount(aw[i] ^ bw[i]);
            }
            return kind == SimilarityKind::l1
                       ? static_cast<double>(hamming)
                       : std::sqrt(static_cast<double>(hamming));
        }
    }
    throw ParameterError("unknown similarity kind");
}

double empirical_loss(const Graph& g, const EmbeddingSet& es,
                      std::span<const EdgePair> pairs) {
    if (pairs.empty()) throw ParameterError("empirical loss requires at least one pair");
    if (g.node_count() != es.node_count()) {
        throw ParameterError("graph and embedding set disagree on node count");
    }
    double sum = 0.0;
    for (const auto& [i, j] : pairs) {
        const double exact = static_cast<double>(common_neighbors_exact(g, i, j));
        const CnEstimate e = estimate_common_neighbors(es.sketches[i], es.sketches[j], es.d);
        const double err = exact - e.value;
        sum += err * err;
    }
    return sum / static_cast<double>(pairs.size());
}

}  // namespace quint
