#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quint/graph.hpp"

namespace quint::verify {

/// One Monte-Carlo bound check: observed statistic vs. theoretical bound plus
/// sampling slack.
struct BoundCheck {
    std::string name;
    double observed = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    bool pass = false;
    std::uint64_t trials = 0;
    std::string note;
};

/// Random simple graph whose degrees never exceed psi, built by rejection.
Graph make_bounded_degree_graph(std::uint32_t n, std::uint32_t psi,
                                std::size_t target_edges, std::uint64_t seed);

/// Degree estimation: fraction of nodes with |deg_hat - deg| beyond
/// 4*sqrt((psi/2) ln(2/delta)) at the formula dimension must stay below
/// delta plus binomial slack.
BoundCheck check_degree_bound(std::uint32_t psi, double delta, unsigned seeds,
                              std::uint32_t nodes_per_graph, std::uint64_t seed);

/// Edge presence never misses a real edge (exact, zero tolerance).
BoundCheck check_edge_false_negatives(std::uint32_t psi, std::uint64_t d,
                                      unsigned graphs, std::uint64_t seed);

/// Edge presence false-positive rate over non-edges stays below 2*psi/d plus
/// binomial slack; trials are spread over fresh (seed, pair) draws.
BoundCheck check_edge_false_positives(std::uint32_t psi, std::uint64_t d,
                                      std::size_t trials, std::uint64_t seed);

/// Common-neighbor estimates outside the +/- 14*sqrt((psi/2) ln(6/rho)) window
/// at the formula dimension occur with frequency at most rho plus slack.
BoundCheck check_cn_window(std::uint32_t psi, double rho, std::size_t pair_trials,
                           std::uint64_t seed);

/// Mean absolute error of the common-neighbor estimate against the exact
/// oracle stays below mae_limit.
BoundCheck check_cn_mae(std::uint32_t psi, double rho, std::size_t pair_trials,
                        std::uint64_t seed, double mae_limit);

/// Zero sketch overlap yields exactly 0, and positive overlap yields a
/// positive estimate (exact, zero tolerance, formula-dimension regime).
BoundCheck check_zero_rule_exact(std::uint32_t psi, double rho,
                                 std::size_t pair_trials, std::uint64_t seed);

/// Among pairs with no common neighbor, the frequency of a positive estimate
/// stays below sqrt(2/(psi ln(2/rho))) plus slack.
BoundCheck check_zero_rule_fp(std::uint32_t psi, double rho, std::size_t pair_trials,
                              std::uint64_t seed);

/// Empirical MSE loss stays below 196*(psi/2)*ln(6/rho) on every seeded run.
BoundCheck check_loss_bound(std::uint32_t psi, double rho, unsigned runs,
                            std::size_t pairs_per_run, std::uint64_t seed);

/// Fourth-power zero rule: pairs whose pairwise overlaps all vanish must give
/// exactly 0, and the frequency of a nonzero estimate among exact-zero A^4
/// pairs stays below the per-term union bound (plus slack) when that bound is
/// informative.
BoundCheck check_power4_zero(std::uint32_t psi, double rho, unsigned graphs,
                             std::uint32_t max_nodes, std::uint64_t seed);

/// The full suite at (psi, rho, delta), check counts scaled from `trials`.
std::vector<BoundCheck> run_suite(std::uint32_t psi, double rho, double delta,
                                  std::size_t trials, std::uint64_t seed);

}  // namespace quint::verify
