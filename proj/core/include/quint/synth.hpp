#pragma once

#include <cstdint>

#include "quint/eval.hpp"
#include "quint/graph.hpp"

namespace quint {

enum class SynthModel { planted_partition, power_law_config };

struct SynthConfig {
    SynthModel model = SynthModel::planted_partition;
    std::uint32_t n = 0;
    std::uint32_t communities = 1;       ///< planted_partition
    double intra_probability = 0.0;      ///< planted_partition
    double inter_probability = 0.0;      ///< planted_partition
    double tau = 2.0;                    ///< power_law_config degree exponent, > 1
    std::uint32_t max_degree_cap = 0;    ///< power_law_config, <= n-1
    std::uint64_t seed = 0;
};

struct SynthResult {
    Graph graph;
    LabelSet labels;  ///< community ids for planted_partition, empty otherwise
};

/// Deterministic given (config, seed). planted_partition samples each pair
/// with the intra/inter probability via geometric skipping; power_law_config
/// draws a capped power-law degree sequence and pairs stubs, rejecting
/// self-loops and duplicates (so realized degrees never exceed the cap).
SynthResult generate(const SynthConfig& config);

}  // namespace quint
