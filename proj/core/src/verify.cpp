#include "quint/verify.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "quint/embedding.hpp"
#include "quint/estimators.hpp"
#include "quint/rng.hpp"

namespace quint::verify {

namespace {

double binomial_slack(double p, double n) {
    if (n <= 0.0) return 0.0;
    const double clamped = std::clamp(p, 0.0, 1.0);
    return 3.0 * std::sqrt(clamped * (1.0 - clamped) / n);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
    return mix64(seed ^ mix64(stream)) ^ mix64(k);
}

}  // namespace

Graph make_bounded_degree_graph(std::uint32_t n, std::uint32_t psi,
                                std::size_t target_edges, std::uint64_t seed) {
    Rng rng(mix64(seed));
    std::vector<std::uint32_t> deg(n, 0);
    std::unordered_set<std::uint64_t> seen;
    std::vector<EdgePair> edges;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 60 * target_edges + 1000;
    while (edges.size() < target_edges && attempts++ < max_attempts) {
        NodeId u = static_cast<NodeId>(rng.below(n));
        NodeId v = static_cast<NodeId>(rng.below(n));
        if (u == v) continue;
        if (deg[u] >= psi || deg[v] >= psi) continue;
        if (u > v) std::swap(u, v);
        if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) continue;
        edges.emplace_back(u, v);
        ++deg[u];
        ++deg[v];
    }
    return Graph::from_edges(n, std::move(edges));
}

BoundCheck check_degree_bound(std::uint32_t psi, double delta, unsigned seeds,
                              std::uint32_t nodes_per_graph, std::uint64_t seed) {
    const std::uint64_t d = compute_dimension(Sparsity{psi}, delta);
    const double window =
        4.0 * std::sqrt((static_cast<double>(psi) / 2.0) * std::log(2.0 / delta));
    std::uint64_t checked = 0, violations = 0;
    for (unsigned s = 0; s < seeds; ++s) {
        const Graph g = make_bounded_degree_graph(
            nodes_per_graph, psi, nodes_per_graph * psi * 3 / 8, sub_seed(seed, 1, s));
        const EmbeddingSet es = embed_graph(g, d, sub_seed(seed, 2, s));
        for (NodeId u = 0; u < g.node_count(); ++u) {
            const double est = estimate_degree(es.sketches[u], d);
            ++checked;
            if (std::abs(est - static_cast<double>(g.degree(u))) > window) ++violations;
        }
    }
    BoundCheck c;
    c.name = "lemma3_degree_window";
    c.trials = checked;
    c.observed = static_cast<double>(violations) / static_cast<double>(checked);
    c.bound = delta;
    c.slack = binomial_slack(delta, static_cast<double>(checked));
    c.pass = c.observed <= c.bound + c.slack;
    c.note = "window=" + std::to_string(window) + " d=" + std::to_string(d);
    return c;
}

BoundCheck check_edge_false_negatives(std::uint32_t psi, std::uint64_t d,
                                      unsigned graphs, std::uint64_t seed) {
    std::uint64_t checked = 0, misses = 0;
    for (unsigned s = 0; s < graphs; ++s) {
        const Graph g =
            make_bounded_degree_graph(256, psi, 256 * psi * 3 / 8, sub_seed(seed, 3, s));
        const EmbeddingSet es = embed_graph(g, d, sub_seed(seed, 4, s));
        const NodeMapper mapper = es.mapper();
        for (const auto& [u, v] : g.edges()) {
            ++checked;
            if (!estimate_edge(es.sketches[u], es.sketches[v], u, v, mapper)) ++misses;
        }
    }
    BoundCheck c;
    c.name = "lemma4_edge_no_false_negatives";
    c.trials = checked;
    c.observed = static_cast<double>(misses);
    c.bound = 0.0;
    c.slack = 0.0;
    c.pass = misses == 0;
    return c;
}

BoundCheck check_edge_false_positives(std::uint32_t psi, std::uint64_t d,
                                      std::size_t trials, std::uint64_t seed) {
    const unsigned graphs = std::max<unsigned>(20, static_cast<unsigned>(trials / 1000));
    const std::size_t per_graph = (trials + graphs - 1) / graphs;
    std::uint64_t checked = 0, hits = 0;
    for (unsigned s = 0; s < graphs && checked < trials; ++s) {
        const std::uint32_t n = 512;
        const Graph g =
            make_bounded_degree_graph(n, psi, n * psi * 3 / 8, sub_seed(seed, 5, s));
        const EmbeddingSet es = embed_graph(g, d, sub_seed(seed, 6, s));
        const NodeMapper mapper = es.mapper();
        Rng rng(sub_seed(seed, 7, s));
        std::size_t done = 0;
        while (done < per_graph && checked < trials) {
            const NodeId u = static_cast<NodeId>(rng.below(n));
            const NodeId v = static_cast<NodeId>(rng.below(n));
            if (u == v || g.has_edge(u, v)) continue;
            ++done;
            ++checked;
            if (estimate_edge(es.sketches[u], es.sketches[v], u, v, mapper)) ++hits;
        }
    }
    BoundCheck c;
    c.name = "lemma4_edge_false_positive_rate";
    c.trials = checked;
    c.observed = static_cast<double>(hits) / static_cast<double>(checked);
    c.bound = 2.0 * static_cast<double>(psi) / static_cast<double>(d);
    c.slack = binomial_slack(c.bound, static_cast<double>(checked));
    c.pass = c.observed <= c.bound + c.slack;
    return c;
}

namespace {

struct PairSample {
    double exact;
    double estimate;
    std::uint64_t raw_overlap;
};

/// Draw pair estimates from fresh bounded-degree graphs at the formula
/// dimension, feeding every theorem-3 style check from one code path.
template <typename Consume>
void sample_cn_pairs(std::uint32_t psi, double rho, std::size_t pair_trials,
                     std::uint64_t seed, std::uint64_t stream, Consume&& consume) {
    const std::uint64_t d = compute_dimension(Sparsity{psi}, rho);
    const unsigned graphs =
        std::max<unsigned>(8, static_cast<unsigned>(pair_trials / 400));
    const std::size_t per_graph = (pair_trials + graphs - 1) / graphs;
    std::size_t produced = 0;
    for (unsigned s = 0; s < graphs && produced < pair_trials; ++s) {
        const std::uint32_t n = 200;
        const Graph g =
            make_bounded_degree_graph(n, psi, n * psi * 3 / 8, sub_seed(seed, stream, s));
        const EmbeddingSet es = embed_graph(g, d, sub_seed(seed, stream + 1, s));
        Rng rng(sub_seed(seed, stream + 2, s));
        std::size_t done = 0;
        while (done < per_graph && produced < pair_trials) {
            const NodeId i = static_cast<NodeId>(rng.below(n));
            const NodeId j = static_cast<NodeId>(rng.below(n));
            if (i == j) continue;
            const CnEstimate e =
                estimate_common_neighbors(es.sketches[i], es.sketches[j], es.d);
            consume(PairSample{static_cast<double>(common_neighbors_exact(g, i, j)),
                               e.value, e.raw_overlap});
            ++done;
            ++produced;
        }
    }
}

}  // namespace

BoundCheck check_cn_window(std::uint32_t psi, double rho, std::size_t pair_trials,
                           std::uint64_t seed) {
    const double window =
        14.0 * std::sqrt((static_cast<double>(psi) / 2.0) * std::log(6.0 / rho));
    std::uint64_t checked = 0, violations = 0;
    sample_cn_pairs(psi, rho, pair_trials, seed, 10, [&](const PairSample& p) {
        ++checked;
        if (std::abs(p.estimate - p.exact) >= window) ++violations;
    });
    BoundCheck c;
    c.name = "thm3_cn_error_window";
    c.trials = checked;
    c.observed = static_cast<double>(violations) / static_cast<double>(checked);
    c.bound = rho;
    c.slack = binomial_slack(rho, static_cast<double>(checked));
    c.pass = c.observed <= c.bound + c.slack;
    c.note = "window=" + std::to_string(window);
    return c;
}

BoundCheck check_cn_mae(std::uint32_t psi, double rho, std::size_t pair_trials,
                        std::uint64_t seed, double mae_limit) {
    double abs_err_sum = 0.0;
    std::uint64_t checked = 0;
    sample_cn_pairs(psi, rho, pair_trials, seed, 10, [&](const PairSample& p) {
        ++checked;
        abs_err_sum += std::abs(p.estimate - p.exact);
    });
    BoundCheck c;
    c.name = "thm3_cn_mean_absolute_error";
    c.trials = checked;
    c.observed = abs_err_sum / static_cast<double>(checked);
    c.bound = mae_limit;
    c.slack = 0.0;
    c.pass = c.observed <= c.bound;
    return c;
}

BoundCheck check_zero_rule_exact(std::uint32_t psi, double rho,
                                 std::size_t pair_trials, std::uint64_t seed) {
    std::uint64_t checked = 0, violations = 0;
    sample_cn_pairs(psi, rho, pair_trials, seed, 20, [&](const PairSample& p) {
        ++checked;
        if (p.raw_overlap == 0 && p.estimate != 0.0) ++violations;
        if (p.raw_overlap > 0 && !(p.estimate > 0.0)) ++violations;
    });
    BoundCheck c;
    c.name = "thm3_zero_rule_exact";
    c.trials = checked;
    c.observed = static_cast<double>(violations);
    c.bound = 0.0;
    c.slack = 0.0;
    c.pass = violations == 0;
    return c;
}

BoundCheck check_zero_rule_fp(std::uint32_t psi, double rho, std::size_t pair_trials,
                              std::uint64_t seed) {
    std::uint64_t zero_pairs = 0, false_positives = 0;
    sample_cn_pairs(psi, rho, pair_trials, seed, 30, [&](const PairSample& p) {
        if (p.exact != 0.0) return;
        ++zero_pairs;
        if (p.estimate > 0.0) ++false_positives;
    });
    BoundCheck c;
    c.name = "thm3_zero_rule_false_positive_rate";
    c.trials = zero_pairs;
    c.bound = std::sqrt(2.0 / (static_cast<double>(psi) * std::log(2.0 / rho)));
    if (zero_pairs == 0) {
        c.observed = 0.0;
        c.pass = true;
        c.note = "no zero-CN pairs sampled";
        return c;
    }
    c.observed = static_cast<double>(false_positives) / static_cast<double>(zero_pairs);
    c.slack = binomial_slack(c.bound, static_cast<double>(zero_pairs));
    c.pass = c.observed <= c.bound + c.slack;
    return c;
}

BoundCheck check_loss_bound(std::uint32_t psi, double rho, unsigned runs,
                            std::size_t pairs_per_run, std::uint64_t seed) {
    const std::uint64_t d = compute_dimension(Sparsity{psi}, rho);
    const double bound =
        196.0 * (static_cast<double>(psi) / 2.0) * std::log(6.0 / rho);
    double worst = 0.0;
    unsigned failures = 0;
    for (unsigned s = 0; s < runs; ++s) {
        const std::uint32_t n = 200;
        const Graph g =
            make_bounded_degree_graph(n, psi, n * psi * 3 / 8, sub_seed(seed, 40, s));
        const EmbeddingSet es = embed_graph(g, d, sub_seed(seed, 41, s));
        Rng rng(sub_seed(seed, 42, s));
        std::vector<EdgePair> pairs;
        pairs.reserve(pairs_per_run);
        while (pairs.size() < pairs_per_run) {
            const NodeId i = static_cast<NodeId>(rng.below(n));
            const NodeId j = static_cast<NodeId>(rng.below(n));
            if (i != j) pairs.emplace_back(i, j);
        }
        const double loss = empirical_loss(g, es, pairs);
        worst = std::max(worst, loss);
        if (loss > bound) ++failures;
    }
    BoundCheck c;
    c.name = "loss_lemma_mse_bound";
    c.trials = runs;
    c.observed = worst;
    c.bound = bound;
    c.slack = 0.0;
    c.pass = failures == 0;
    c.note = "max over " + std::to_string(runs) + " runs";
    return c;
}

BoundCheck check_power4_zero(std::uint32_t psi, double rho, unsigned graphs,
                             std::uint32_t max_nodes, std::uint64_t seed) {
    const std::uint64_t d = compute_dimension(Sparsity{psi}, rho);
    std::uint64_t zero_pairs = 0, nonzero_estimates = 0, structural_violations = 0;
    for (unsigned s = 0; s < graphs; ++s) {
        Rng rng(sub_seed(seed, 50, s));
        const std::uint32_t n =
            static_cast<std::uint32_t>(32 + rng.below(std::max(1u, max_nodes - 31)));
        const Graph g = make_bounded_degree_graph(n, psi, n, sub_seed(seed, 51, s));
        const EmbeddingSet es = embed_graph(g, d, sub_seed(seed, 52, s));
        const auto a4 = matrix_power_exact(g, 2);
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                if (a4[static_cast<std::size_t>(i) * n + j] != 0) continue;
                ++zero_pairs;
                const double est = estimate_power4(es, i, j);
                bool any_term = false;
                for (NodeId k = 0; k < n && !any_term; ++k) {
                    any_term = inner_product(es.sketches[i], es.sketches[k]) > 0 &&
                               inner_product(es.sketches[k], es.sketches[j]) > 0;
                }
                if (!any_term && est != 0.0) ++structural_violations;
                if (est != 0.0) ++nonzero_estimates;
            }
        }
    }
    BoundCheck c;
    c.name = "thm4_power4_zero_rule";
    c.trials = zero_pairs;
    if (zero_pairs == 0) {
        c.pass = true;
        c.note = "no zero-A4 pairs sampled";
        return c;
    }
    c.observed = static_cast<double>(nonzero_estimates) / static_cast<double>(zero_pairs);
    const double q = static_cast<double>(psi) * static_cast<double>(psi) /
                     static_cast<double>(d);
    const double union_bound = std::min(
        1.0, 2.0 * q * static_cast<double>(psi) * static_cast<double>(psi) +
                 static_cast<double>(max_nodes) * q * q);
    c.bound = union_bound;
    c.slack = binomial_slack(union_bound, static_cast<double>(zero_pairs));
    // Structural part is zero-tolerance regardless of the union bound.
    c.pass = structural_violations == 0 &&
             (union_bound >= 1.0 || c.observed <= c.bound + c.slack);
    c.note = "structural_violations=" + std::to_string(structural_violations);
    return c;
}

std::vector<BoundCheck> run_suite(std::uint32_t psi, double rho, double delta,
                                  std::size_t trials, std::uint64_t seed) {
    if (psi == 0) throw ParameterError("verification needs psi >= 1");
    const std::uint64_t d = compute_dimension(Sparsity{psi}, rho);
    std::vector<BoundCheck> checks;
    checks.push_back(check_degree_bound(
        psi, delta, std::max<unsigned>(50, static_cast<unsigned>(trials / 40)), 256,
        seed));
    checks.push_back(check_edge_false_negatives(psi, d, 10, seed));
    checks.push_back(check_edge_false_positives(
        psi, d, std::max<std::size_t>(trials * 50, 10000), seed));
    checks.push_back(check_cn_window(psi, rho, trials, seed));
    checks.push_back(check_zero_rule_exact(psi, rho, trials, seed));
    checks.push_back(check_zero_rule_fp(psi, rho, trials, seed));
    checks.push_back(check_loss_bound(
        psi, rho, std::max<unsigned>(100, static_cast<unsigned>(trials / 20)), 200,
        seed));
    checks.push_back(check_power4_zero(psi, rho, 10, 64, seed));
    return checks;
}

}  // namespace quint::verify
