#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "fedcomp/graph.hpp"
#include "fedcomp/partition.hpp"
#include "fedcomp/selector.hpp"

namespace {

using namespace fedcomp;

Instance make_instance(std::size_t n, double p_compete, double p_benefit, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution compete(p_compete), benefit(p_benefit);
    std::uniform_real_distribution<double> weight(0.05, 1.05);
    std::vector<CompetingEdge> s;
    std::vector<BenefitEdge> w;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b) {
            if (a == b) continue;
            if (a < b && compete(rng)) s.push_back({a, b});
            if (benefit(rng)) w.push_back({a, b, weight(rng)});
        }
    return Instance::from_edges(n, s, w);
}

void BM_SelectAll(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto inst = make_instance(n, 0.2, 0.5, 42);
    for (auto _ : state) benchmark::DoNotOptimize(select_all(inst));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelectAll)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ClosureInsertion(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<std::pair<NodeId, NodeId>> edges;
    while (edges.size() < 4 * n) {
        const NodeId a = node(rng), b = node(rng);
        if (a != b && seen.emplace(a, b).second) edges.emplace_back(a, b);
    }
    for (auto _ : state) {
        UsageGraph g(n);
        for (auto [a, b] : edges) g.add_edge_with_closure(a, b);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(edges.size()));
}
BENCHMARK(BM_ClosureInsertion)->Arg(32)->Arg(128)->Arg(512);

void BM_CliqueCoverExact(benchmark::State& state) {
    const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 0.4, 0.0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(min_clique_cover(inst, CoverMode::exact));
}
BENCHMARK(BM_CliqueCoverExact)->DenseRange(8, 16, 4);

void BM_CliqueCoverGreedy(benchmark::State& state) {
    const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 0.4, 0.0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(min_clique_cover(inst, CoverMode::greedy));
}
BENCHMARK(BM_CliqueCoverGreedy)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
