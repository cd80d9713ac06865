#include "quint/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace quint {

namespace {

void normalize_edges(std::vector<EdgePair>& edges) {
    for (auto& [u, v] : edges) {
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    // self-loops sort first within a fixed u, but erase-remove is simplest
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [](const EdgePair& e) { return e.first == e.second; }),
                edges.end());
}

bool parse_u64(std::string_view tok, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

struct RawEdges {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // external ids
};

RawEdges parse_edge_lines(std::istream& in) {
    RawEdges raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;

        std::uint64_t ids[2];
        std::size_t pos = begin;
        for (int t = 0; t < 2; ++t) {
            std::size_t end = line.find_first_of(" \t\r", pos);
            std::string_view tok(line.data() + pos,
                                 (end == std::string::npos ? line.size() : end) - pos);
            if (tok.empty() || !parse_u64(tok, ids[t])) {
                throw ParseError("edge list line " + std::to_string(line_no) +
                                 ": expected two non-negative integers, got \"" + line +
                                 "\"");
            }
            pos = line.find_first_not_of(" \t\r", end);
            if (t == 0 && pos == std::string::npos) {
                throw ParseError("edge list line " + std::to_string(line_no) +
                                 ": expected two non-negative integers, got \"" + line +
                                 "\"");
            }
        }
        if (pos != std::string::npos) {
            throw ParseError("edge list line " + std::to_string(line_no) +
                             ": trailing tokens after the two ids in \"" + line + "\"");
        }
        raw.pairs.emplace_back(ids[0], ids[1]);
    }
    return raw;
}

Graph assemble(const RawEdges& raw,
               const std::unordered_map<std::uint64_t, NodeId>& to_internal,
               std::vector<std::uint64_t> ext_ids) {
    std::vector<EdgePair> edges;
    edges.reserve(raw.pairs.size());
    for (const auto& [a, b] : raw.pairs) {
        edges.emplace_back(to_internal.at(a), to_internal.at(b));
    }
    const std::uint32_t n = static_cast<std::uint32_t>(ext_ids.size());
    return Graph::from_edges(n, std::move(edges), std::move(ext_ids));
}

}  // namespace

Graph Graph::from_edges(std::uint32_t n, std::vector<EdgePair> edges) {
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw ParameterError("edge endpoint exceeds node count " + std::to_string(n));
        }
    }
    normalize_edges(edges);

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.ext_ids_.resize(n);
    for (std::uint32_t u = 0; u < n; ++u) g.ext_ids_[u] = u;
    g.build_adjacency();
    return g;
}

Graph Graph::from_edges(std::uint32_t n, std::vector<EdgePair> edges,
                        std::vector<std::uint64_t> ext_ids) {
    if (ext_ids.size() != n) {
        throw ParameterError("external id map size does not match node count");
    }
    Graph g = from_edges(n, std::move(edges));
    g.ext_ids_ = std::move(ext_ids);
    return g;
}

void Graph::build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& [u, v] : edges_) {
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    for (std::uint32_t u = 0; u < n_; ++u) offsets_[u + 1] += offsets_[u];

    neighbors_.resize(2 * edges_.size());
    std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        neighbors_[cursor[u]++] = v;
        neighbors_[cursor[v]++] = u;
    }
    for (std::uint32_t u = 0; u < n_; ++u) {
        std::sort(neighbors_.begin() + offsets_[u], neighbors_.begin() + offsets_[u + 1]);
    }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto adj = neighbors(u);
    check_node(v);
    return std::binary_search(adj.begin(), adj.end(), v);
}

Graph load_edge_list(std::istream& in) {
    RawEdges raw = parse_edge_lines(in);
    if (raw.pairs.empty()) {
        throw Error("edge list is empty: no edges found");
    }
    std::unordered_map<std::uint64_t, NodeId> to_internal;
    std::vector<std::uint64_t> ext_ids;
    for (const auto& [a, b] : raw.pairs) {
        for (std::uint64_t id : {a, b}) {
            if (to_internal.emplace(id, static_cast<NodeId>(ext_ids.size())).second) {
                ext_ids.push_back(id);
            }
        }
    }
    return assemble(raw, to_internal, std::move(ext_ids));
}

Graph load_edge_list_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open edge list file: " + path.string());

    std::filesystem::path sidecar = path;
    sidecar += ".ids";
    if (!std::filesystem::exists(sidecar)) {
        return load_edge_list(in);
    }

    std::ifstream ids_in(sidecar);
    if (!ids_in) throw Error("cannot open id-map sidecar: " + sidecar.string());
    std::unordered_map<std::uint64_t, NodeId> to_internal;
    std::vector<std::uint64_t> ext_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ids_in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::uint64_t internal, external;
        if (!(ls >> internal >> external)) {
            throw ParseError("id-map sidecar line " + std::to_string(line_no) +
                             ": expected \"internal<TAB>external\"");
        }
        if (internal != ext_ids.size()) {
            throw ParseError("id-map sidecar line " + std::to_string(line_no) +
                             ": internal ids must be consecutive from 0");
        }
        if (!to_internal.emplace(external, static_cast<NodeId>(internal)).second) {
            throw ParseError("id-map sidecar line " + std::to_string(line_no) +
                             ": external id " + std::to_string(external) +
                             " appears twice");
        }
        ext_ids.push_back(external);
    }

    RawEdges raw = parse_edge_lines(in);
    for (const auto& [a, b] : raw.pairs) {
        if (!to_internal.count(a) || !to_internal.count(b)) {
            throw ParseError("edge list references id missing from the sidecar");
        }
    }
    return assemble(raw, to_internal, std::move(ext_ids));
}

void save_edge_list(const Graph& g, std::ostream& out) {
    for (const auto& [u, v] : g.edges()) {
        out << g.external_id(u) << ' ' << g.external_id(v) << '\n';
    }
}

void save_edge_list_file(const Graph& g, const std::filesystem::path& path) {
    {
        std::ofstream out(path);
        if (!out) throw Error("cannot write edge list file: " + path.string());
        save_edge_list(g, out);
    }
    std::filesystem::path sidecar = path;
    sidecar += ".ids";
    std::ofstream ids_out(sidecar);
    if (!ids_out) throw Error("cannot write id-map sidecar: " + sidecar.string());
    for (std::uint32_t u = 0; u < g.node_count(); ++u) {
        ids_out << u << '\t' << g.external_id(u) << '\n';
    }
}

Sparsity max_degree(const Graph& g) {
    std::uint32_t psi = 0;
    for (std::uint32_t u = 0; u < g.node_count(); ++u) {
        psi = std::max(psi, g.degree(u));
    }
    return Sparsity{psi};
}

std::uint64_t common_neighbors_exact(const Graph& g, NodeId i, NodeId j) {
    auto a = g.neighbors(i);
    auto b = g.neighbors(j);
    std::uint64_t count = 0;
    std::size_t x = 0, y = 0;
    while (x < a.size() && y < b.size()) {
        if (a[x] < b[y]) {
            ++x;
        } else if (a[x] > b[y]) {
            ++y;
        } else {
            ++count;
            ++x;
            ++y;
        }
    }
    return count;
}

namespace {

std::vector<std::uint64_t> square(const std::vector<std::uint64_t>& m, std::size_t n) {
    std::vector<std::uint64_t> out(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            std::uint64_t mik = m[i * n + k];
            if (mik == 0) continue;
            const std::uint64_t* row_k = m.data() + k * n;
            std::uint64_t* row_o = out.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) row_o[j] += mik * row_k[j];
        }
    }
    return out;
}

}  // namespace

std::vector<std::uint64_t> matrix_power_exact(const Graph& g, unsigned t) {
    if (t < 1) throw ParameterError("matrix power exponent t must be >= 1");
    const std::size_t n = g.node_count();
    if (n > kDenseOracleMaxNodes) {
        throw SizeError("dense matrix oracle refused: " + std::to_string(n) +
                        " nodes exceeds the guard of " +
                        std::to_string(kDenseOracleMaxNodes));
    }
    std::vector<std::uint64_t> m(n * n, 0);
    for (const auto& [u, v] : g.edges()) {
        m[static_cast<std::size_t>(u) * n + v] = 1;
        m[static_cast<std::size_t>(v) * n + u] = 1;
    }
    for (unsigned s = 0; s < t; ++s) m = square(m, n);
    return m;
}

std::uint64_t matrix_power_entry_exact(const Graph& g, NodeId i, NodeId j, unsigned t) {
    g.check_node(i);
    g.check_node(j);
    auto m = matrix_power_exact(g, t);
    return m[static_cast<std::size_t>(i) * g.node_count() + j];
}

std::vector<std::uint32_t> connected_components(const Graph& g) {
    const std::uint32_t n = g.node_count();
    std::vector<std::uint32_t> comp(n, n);  // n = unvisited
    std::vector<NodeId> stack;
    std::uint32_t next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != n) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (comp[v] == n) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

}  // namespace quint
