#include "quint/embedding.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

namespace quint {

std::uint64_t compute_dimension(Sparsity psi, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw ParameterError("rho must lie in (0,1), got " + std::to_string(rho));
    }
    if (psi.psi == 0) return 1;
    const double p = static_cast<double>(psi.psi);
    const double d = p * p * std::sqrt((p / 2.0) * std::log(2.0 / rho));
    const double up = std::ceil(d);
    return up < 1.0 ? 1 : static_cast<std::uint64_t>(up);
}

Sketch embed_node(std::span<const NodeId> neighbors, const NodeMapper& mapper) {
    return embed_node_with(neighbors, mapper, mapper.dim());
}

EmbeddingSet embed_graph(const Graph& g, std::uint64_t d, std::uint64_t seed,
                         unsigned threads) {
    if (d == 0) throw ParameterError("embedding dimension must be positive");
    const NodeMapper mapper(seed, d);
    const std::uint32_t n = g.node_count();

    EmbeddingSet es;
    es.d = d;
    es.seed = seed;
    es.psi = max_degree(g).psi;
    es.sketches.assign(n, Sketch(d));

    auto build_rows = [&](std::uint32_t begin, std::uint32_t end) {
        for (std::uint32_t i = begin; i < end; ++i) {
            for (NodeId k : g.neighbors(i)) {
                es.sketches[i].set(mapper(k));
            }
        }
    };

    // Each row is written by exactly one worker, so any thread count yields
    // the same bits.
    if (threads <= 1 || n < 2 * threads) {
        build_rows(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        const std::uint32_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint32_t begin = t * chunk;
            const std::uint32_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(build_rows, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return es;
}

EmbeddingSet embed_graph_with_rho(const Graph& g, double rho, std::uint64_t seed,
                                  unsigned threads) {
    const std::uint64_t d = compute_dimension(max_degree(g), rho);
    EmbeddingSet es = embed_graph(g, d, seed, threads);
    es.rho = rho;
    return es;
}

Sketch merge_sketches(const Sketch& a, const Sketch& b) {
    if (a.dim() != b.dim()) {
        throw ParameterError("merge_sketches dimension mismatch: " +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    Sketch out = a;
    auto ow = out.words();
    auto bw = b.words();
    for (std::size_t w = 0; w < ow.size(); ++w) ow[w] |= bw[w];
    return out;
}

void apply_edge_update(EmbeddingSet& es, NodeId i, NodeId j) {
    if (i == j) throw ParameterError("self-loop edge update rejected");
    if (i >= es.node_count() || j >= es.node_count()) {
        throw ParameterError("edge update node id out of range");
    }
    const NodeMapper mapper = es.mapper();
    es.sketches[i].set(mapper(j));
    es.sketches[j].set(mapper(i));
}

namespace {

constexpr char kMagic[4] = {'Q', 'N', 'T', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::ostream& out, const void* p, std::size_t len) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(len));
}

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(out, b, 8);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

bool get_bytes(std::istream& in, void* p, std::size_t len) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(len));
    return static_cast<std::size_t>(in.gcount()) == len;
}

std::uint32_t get_u32(std::istream& in, const char* field) {
    unsigned char b[4];
    if (!get_bytes(in, b, 4)) throw FormatError(std::string("sketch file truncated in ") + field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in, const char* field) {
    unsigned char b[8];
    if (!get_bytes(in, b, 8)) throw FormatError(std::string("sketch file truncated in ") + field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void save_embeddings(const EmbeddingSet& es, std::ostream& out) {
    put_bytes(out, kMagic, 4);
    put_u32(out, kVersion);
    put_u64(out, es.node_count());
    put_u64(out, es.d);
    put_u64(out, es.seed);
    put_u64(out, es.psi);
    const unsigned char rho_present = es.rho.has_value() ? 1 : 0;
    put_bytes(out, &rho_present, 1);
    put_f64(out, es.rho.value_or(0.0));
    for (const Sketch& s : es.sketches) {
        for (std::uint64_t w : s.words()) put_u64(out, w);
    }
    if (!out) throw Error("sketch file write failed");
}

EmbeddingSet load_embeddings(std::istream& in) {
    char magic[4];
    if (!get_bytes(in, magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("sketch file magic mismatch: expected QNTS");
    }
    const std::uint32_t version = get_u32(in, "version");
    if (version != kVersion) {
        throw FormatError("sketch file version " + std::to_string(version) +
                          " unsupported (expected " + std::to_string(kVersion) + ")");
    }
    const std::uint64_t n = get_u64(in, "node count");
    const std::uint64_t d = get_u64(in, "dimension");
    if (d == 0) throw FormatError("sketch file dimension field is zero");
    const std::uint64_t seed = get_u64(in, "seed");
    const std::uint64_t psi = get_u64(in, "psi");
    unsigned char rho_present;
    if (!get_bytes(in, &rho_present, 1)) throw FormatError("sketch file truncated in rho flag");
    if (rho_present > 1) throw FormatError("sketch file rho flag must be 0 or 1");
    const std::uint64_t rho_bits = get_u64(in, "rho");
    double rho_value;
    std::memcpy(&rho_value, &rho_bits, 8);

    EmbeddingSet es;
    es.d = d;
    es.seed = seed;
    es.psi = static_cast<std::uint32_t>(psi);
    if (rho_present) es.rho = rho_value;
    es.sketches.assign(n, Sketch(d));
    const std::size_t words = (d + 63) / 64;
    for (std::uint64_t row = 0; row < n; ++row) {
        auto w = es.sketches[row].words();
        for (std::size_t k = 0; k < words; ++k) {
            unsigned char b[8];
            if (!get_bytes(in, b, 8)) {
                throw FormatError("sketch file truncated in row " + std::to_string(row));
            }
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
            w[k] = v;
        }
        if ((d & 63) != 0 && (w.back() >> (d & 63)) != 0) {
            throw FormatError("sketch file row " + std::to_string(row) +
                              " has bits set beyond the dimension");
        }
    }
    return es;
}

void save_embeddings_file(const EmbeddingSet& es, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write sketch file: " + path.string());
    save_embeddings(es, out);
}

EmbeddingSet load_embeddings_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open sketch file: " + path.string());
    return load_embeddings(in);
}

}  // namespace quint
