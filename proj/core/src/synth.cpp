#include "quint/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "quint/rng.hpp"

namespace quint {

namespace {

void check_common(const SynthConfig& c) {
    if (c.n == 0) throw ParameterError("synthetic graph needs n > 0");
}

/// Sample every pair of a linear index space of size `space` independently
/// with probability p using geometric skips, and emit the selected indices.
template <typename Emit>
void bernoulli_skip_sample(Rng& rng, std::uint64_t space, double p, Emit&& emit) {
    if (p <= 0.0 || space == 0) return;
    if (p >= 1.0) {
        for (std::uint64_t k = 0; k < space; ++k) emit(k);
        return;
    }
    const double log_q = std::log1p(-p);
    double cursor = -1.0;
    while (true) {
        const double u = rng.uniform();
        cursor += 1.0 + std::floor(std::log1p(-u) / log_q);
        if (cursor >= static_cast<double>(space)) break;
        emit(static_cast<std::uint64_t>(cursor));
    }
}

/// Map a linear index into the upper triangle of a b x b block (i < j).
EdgePair triangle_unrank(std::uint64_t k, std::uint64_t b) {
    // Row i claims b-1-i pairs; invert the cumulative count with the
    // quadratic formula, then fix up rounding.
    const double bd = static_cast<double>(b);
    double id = std::floor(bd - 0.5 - std::sqrt((bd - 0.5) * (bd - 0.5) - 2.0 * static_cast<double>(k)));
    auto row_start = [&](std::uint64_t i) {
        return i * (2 * b - i - 1) / 2;
    };
    std::uint64_t i = id < 0 ? 0 : static_cast<std::uint64_t>(id);
    while (i + 1 < b && row_start(i + 1) <= k) ++i;
    while (i > 0 && row_start(i) > k) --i;
    const std::uint64_t j = i + 1 + (k - row_start(i));
    return {static_cast<NodeId>(i), static_cast<NodeId>(j)};
}

SynthResult generate_planted_partition(const SynthConfig& c) {
    if (c.communities == 0 || c.communities > c.n) {
        throw ParameterError("community count must lie in [1, n]");
    }
    for (double p : {c.intra_probability, c.inter_probability}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ParameterError("edge probabilities must lie in [0,1]");
        }
    }

    // Communities are contiguous node ranges.
    std::vector<std::uint32_t> start(c.communities + 1);
    for (std::uint32_t b = 0; b <= c.communities; ++b) {
        start[b] = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(b) * c.n) / c.communities);
    }

    Rng rng(mix64(c.seed));
    std::vector<EdgePair> edges;
    for (std::uint32_t a = 0; a < c.communities; ++a) {
        const std::uint32_t sa = start[a + 1] - start[a];
        const std::uint64_t intra_space =
            static_cast<std::uint64_t>(sa) * (sa - 1) / 2;
        bernoulli_skip_sample(rng, intra_space, c.intra_probability, [&](std::uint64_t k) {
            auto [i, j] = triangle_unrank(k, sa);
            edges.emplace_back(start[a] + i, start[a] + j);
        });
        for (std::uint32_t b = a + 1; b < c.communities; ++b) {
            const std::uint32_t sb = start[b + 1] - start[b];
            const std::uint64_t cross_space = static_cast<std::uint64_t>(sa) * sb;
            bernoulli_skip_sample(rng, cross_space, c.inter_probability,
                                  [&](std::uint64_t k) {
                                      edges.emplace_back(
                                          start[a] + static_cast<NodeId>(k / sb),
                                          start[b] + static_cast<NodeId>(k % sb));
                                  });
        }
    }

    SynthResult result;
    result.graph = Graph::from_edges(c.n, std::move(edges));
    result.labels.num_classes = c.communities;
    result.labels.multi_label = false;
    result.labels.labels.resize(c.n);
    for (std::uint32_t b = 0; b < c.communities; ++b) {
        for (std::uint32_t u = start[b]; u < start[b + 1]; ++u) {
            result.labels.labels[u] = {b};
        }
    }
    return result;
}

SynthResult generate_power_law(const SynthConfig& c) {
    if (!(c.tau > 1.0)) throw ParameterError("degree exponent tau must exceed 1");
    if (c.max_degree_cap == 0 || c.max_degree_cap > c.n - 1) {
        throw ParameterError("degree cap must lie in [1, n-1]");
    }

    // Discrete power-law degree distribution on [1, cap] via inverse CDF.
    std::vector<double> cdf(c.max_degree_cap);
    double total = 0.0;
    for (std::uint32_t k = 1; k <= c.max_degree_cap; ++k) {
        total += std::pow(static_cast<double>(k), -c.tau);
        cdf[k - 1] = total;
    }
    for (double& v : cdf) v /= total;

    Rng rng(mix64(c.seed));
    std::vector<NodeId> stubs;
    for (std::uint32_t u = 0; u < c.n; ++u) {
        const double r = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), r);
        const std::uint32_t deg =
            static_cast<std::uint32_t>(it - cdf.begin()) + 1;
        for (std::uint32_t s = 0; s < deg; ++s) stubs.push_back(u);
    }
    rng.shuffle(stubs);
    if (stubs.size() % 2) stubs.pop_back();  // odd stub total: drop one

    // Pair consecutive stubs; reject self-loops and duplicates so realized
    // degrees never exceed the sampled (capped) sequence.
    std::unordered_set<std::uint64_t> seen;
    std::vector<EdgePair> edges;
    for (std::size_t s = 0; s < stubs.size(); s += 2) {
        NodeId u = stubs[s], v = stubs[s + 1];
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (seen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) {
            edges.emplace_back(u, v);
        }
    }

    SynthResult result;
    result.graph = Graph::from_edges(c.n, std::move(edges));
    result.labels.labels.resize(c.n);
    return result;
}

}  // namespace

SynthResult generate(const SynthConfig& config) {
    check_common(config);
    switch (config.model) {
        case SynthModel::planted_partition:
            return generate_planted_partition(config);
        case SynthModel::power_law_config:
            return generate_power_law(config);
    }
    throw ParameterError("unknown synthetic model");
}

}  // namespace quint
