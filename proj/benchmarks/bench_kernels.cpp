#include <benchmark/benchmark.h>

#include "quint/embedding.hpp"
#include "quint/estimators.hpp"
#include "quint/synth.hpp"
#include "quint/verify.hpp"

namespace {

using namespace quint;

Graph sized_graph(std::uint32_t n, std::uint32_t psi) {
    return verify::make_bounded_degree_graph(n, psi, n * psi / 4, 42);
}

void BM_EmbedGraph(benchmark::State& state) {
    const Graph g = sized_graph(static_cast<std::uint32_t>(state.range(0)), 16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(embed_graph(g, 1000, 7));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_EmbedGraph)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_EmbedNode(benchmark::State& state) {
    std::vector<NodeId> neighbors(static_cast<std::size_t>(state.range(0)));
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
        neighbors[k] = static_cast<NodeId>(3 * k + 1);
    }
    const NodeMapper mapper(9, 4096);
    for (auto _ : state) {
        benchmark::DoNotOptimize(embed_node(neighbors, mapper));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_EmbedNode)->Arg(16)->Arg(256)->Arg(4096);

void BM_InnerProduct(benchmark::State& state) {
    const Graph g = sized_graph(256, 16);
    const EmbeddingSet es = embed_graph(g, static_cast<std::uint64_t>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(inner_product(es.sketches[0], es.sketches[1]));
    }
}
BENCHMARK(BM_InnerProduct)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_EstimateCommonNeighbors(benchmark::State& state) {
    const Graph g = sized_graph(256, 16);
    const EmbeddingSet es = embed_graph(g, static_cast<std::uint64_t>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_common_neighbors(es.sketches[0], es.sketches[1], es.d));
    }
}
BENCHMARK(BM_EstimateCommonNeighbors)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_PlantedPartition(benchmark::State& state) {
    SynthConfig cfg;
    cfg.model = SynthModel::planted_partition;
    cfg.n = static_cast<std::uint32_t>(state.range(0));
    cfg.communities = 4;
    cfg.intra_probability = 40.0 / cfg.n;
    cfg.inter_probability = 4.0 / cfg.n;
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(cfg));
    }
}
BENCHMARK(BM_PlantedPartition)->Arg(10000)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();
