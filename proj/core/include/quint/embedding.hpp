#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "quint/graph.hpp"
#include "quint/rng.hpp"
#include "quint/sketch.hpp"

namespace quint {

/// The random bucket map: node id -> [0,d). Stateless keyed hash — a
/// SplitMix64 finalizer over (mixed seed XOR id), reduced into [0,d) by the
/// high-bits multiply of reduce_to_range. Nothing is stored per node, two
/// mappers with equal (seed,d) agree on every id, and the exact reduction is
/// fixed so sketches reproduce bit-for-bit across platforms.
class NodeMapper {
public:
    NodeMapper(std::uint64_t seed, std::uint64_t d)
        : seed_(seed), seed_mixed_(mix64(seed)), d_(d) {
        if (d == 0) throw ParameterError("mapper dimension must be positive");
    }

    std::uint64_t operator()(std::uint64_t node) const noexcept {
        return reduce_to_range(mix64(seed_mixed_ ^ node), d_);
    }

    std::uint64_t dim() const noexcept { return d_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t seed_mixed_;
    std::uint64_t d_;
};

/// Sketches of all nodes of one graph plus everything needed to reconstruct
/// the bucket map: (seed, d). psi is the sparsity recorded at build time; rho
/// is present only when the dimension came from the formula.
struct EmbeddingSet {
    std::vector<Sketch> sketches;
    std::uint64_t d = 0;
    std::uint64_t seed = 0;
    std::uint32_t psi = 0;
    std::optional<double> rho;

    std::size_t node_count() const noexcept { return sketches.size(); }
    NodeMapper mapper() const { return NodeMapper(seed, d); }

    /// The constant D = 1 - 1/d used by the inversion formulas (derived, never stored).
    double big_d() const noexcept { return 1.0 - 1.0 / static_cast<double>(d); }
};

/// ceil(psi^2 * sqrt((psi/2) ln(2/rho))), minimum 1. psi = 0 (edgeless graph)
/// degenerates to 1. rho must lie in (0,1).
std::uint64_t compute_dimension(Sparsity psi, double rho);

/// Sketch one neighbor list under an arbitrary bucket function. Time is
/// proportional to the neighbor count.
template <typename BucketFn>
Sketch embed_node_with(std::span<const NodeId> neighbors, BucketFn&& bucket_of,
                       std::uint64_t d) {
    Sketch s(d);
    for (NodeId k : neighbors) s.set(bucket_of(std::uint64_t{k}));
    return s;
}

Sketch embed_node(std::span<const NodeId> neighbors, const NodeMapper& mapper);

/// Sketch every node of g: bit j of sketch i is 1 iff some neighbor of i maps
/// to bucket j. Rows are partitioned across threads; each row is written by
/// exactly one worker, so the result is identical for any thread count.
EmbeddingSet embed_graph(const Graph& g, std::uint64_t d, std::uint64_t seed,
                         unsigned threads = 1);

/// embed_graph with the dimension derived from the formula; records rho.
EmbeddingSet embed_graph_with_rho(const Graph& g, double rho, std::uint64_t seed,
                                  unsigned threads = 1);

/// Bitwise OR. Equals the sketch of the union of the two neighbor sets under a
/// shared mapper. Dimensions must match.
Sketch merge_sketches(const Sketch& a, const Sketch& b);

/// Register edge (i,j): sets bit pi(j) in sketch i and bit pi(i) in sketch j.
/// Idempotent; rejects i == j. Callers must serialize updates per node row.
void apply_edge_update(EmbeddingSet& es, NodeId i, NodeId j);

/// Binary format (little-endian): magic "QNTS", u32 version=1, u64 n, u64 d,
/// u64 seed, u64 psi, u8 rho_present, f64 rho (0 if absent), then n rows of
/// ceil(d/64) u64 words.
void save_embeddings(const EmbeddingSet& es, std::ostream& out);
void save_embeddings_file(const EmbeddingSet& es, const std::filesystem::path& path);

/// Throws FormatError naming the offending field (or row index on truncation).
EmbeddingSet load_embeddings(std::istream& in);
EmbeddingSet load_embeddings_file(const std::filesystem::path& path);

}  // namespace quint
