#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "quint/errors.hpp"

namespace quint {

using NodeId = std::uint32_t;
using EdgePair = std::pair<NodeId, NodeId>;

/// Maximum degree of the network; governs the embedding-dimension formula and
/// every estimator error bound.
struct Sparsity {
    std::uint32_t psi = 0;
};

/// Compact undirected simple graph: deduplicated edge list (u<v), sorted CSR
/// adjacency, and a map from internal contiguous ids back to the external ids
/// seen at load time. Immutable after construction.
class Graph {
public:
    Graph() = default;

    /// Build from internal-id pairs. Self-loops and duplicates are dropped,
    /// pairs are symmetrized. External ids default to the identity map.
    static Graph from_edges(std::uint32_t n, std::vector<EdgePair> edges);

    /// from_edges with an explicit internal→external id map (size n).
    static Graph from_edges(std::uint32_t n, std::vector<EdgePair> edges,
                            std::vector<std::uint64_t> ext_ids);

    std::uint32_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<EdgePair>& edges() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId u) const {
        check_node(u);
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }

    std::uint32_t degree(NodeId u) const {
        check_node(u);
        return static_cast<std::uint32_t>(offsets_[u + 1] - offsets_[u]);
    }

    bool has_edge(NodeId u, NodeId v) const;

    std::uint64_t external_id(NodeId u) const {
        check_node(u);
        return ext_ids_[u];
    }
    const std::vector<std::uint64_t>& external_ids() const noexcept { return ext_ids_; }

    void check_node(NodeId u) const {
        if (u >= n_) {
            throw ParameterError("node id " + std::to_string(u) +
                                 " out of range for graph with " + std::to_string(n_) +
                                 " nodes");
        }
    }

private:
    friend Graph load_edge_list(std::istream& in);
    friend Graph load_edge_list_file(const std::filesystem::path& path);

    void build_adjacency();

    std::uint32_t n_ = 0;
    std::vector<EdgePair> edges_;          // u < v, sorted, unique
    std::vector<std::uint64_t> offsets_;   // CSR offsets, size n+1
    std::vector<NodeId> neighbors_;        // sorted per node
    std::vector<std::uint64_t> ext_ids_;   // internal -> external
};

/// Parse a whitespace-separated edge list: two non-negative integers per line,
/// '#' lines ignored. Self-loops and duplicates are dropped, directed pairs
/// symmetrized, external ids compacted in first-appearance order.
/// Throws ParseError with the line number on malformed lines and Error on
/// empty input (no nodes at all).
Graph load_edge_list(std::istream& in);

/// load_edge_list from a file; when a "<path>.ids" sidecar exists, the node
/// universe and id map come from it instead of first-appearance compaction
/// (this makes save/load round-trips exact, isolated nodes included).
Graph load_edge_list_file(const std::filesystem::path& path);

/// Write edges as "ext(u) ext(v)" lines in internal order.
void save_edge_list(const Graph& g, std::ostream& out);

/// Write the edge list plus the "<path>.ids" sidecar with lines
/// "internal<TAB>external" covering every node.
void save_edge_list_file(const Graph& g, const std::filesystem::path& path);

Sparsity max_degree(const Graph& g);

/// |adj(i) ∩ adj(j)| by sorted-list intersection.
std::uint64_t common_neighbors_exact(const Graph& g, NodeId i, NodeId j);

/// Dense n*n exact integer matrices are refused above this size; the oracles
/// below exist for testing, not production.
inline constexpr std::uint32_t kDenseOracleMaxNodes = 4096;

/// Entry (i,j) of A^(2^t) by repeated exact squaring, t >= 1.
std::uint64_t matrix_power_entry_exact(const Graph& g, NodeId i, NodeId j, unsigned t);

/// Full A^(2^t) as a flat row-major n*n matrix, t >= 1.
std::vector<std::uint64_t> matrix_power_exact(const Graph& g, unsigned t);

/// Component label per node (labels are arbitrary but consistent).
std::vector<std::uint32_t> connected_components(const Graph& g);

}  // namespace quint
