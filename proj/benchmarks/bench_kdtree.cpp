#include <benchmark/benchmark.h>

#include "kdss/kdtree.hpp"
#include "kdss/random.hpp"

namespace {

std::vector<kdss::Vec3> uniform_positions(std::size_t n, std::uint64_t seed) {
    kdss::SeededRng rng(seed);
    std::vector<kdss::Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({rng.unit(), rng.unit(), rng.unit()});
    }
    return out;
}

void BM_Build(benchmark::State& state) {
    const auto positions = uniform_positions(
        static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        kdss::KdTree tree(positions);
        benchmark::DoNotOptimize(tree.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Build)->RangeMultiplier(10)->Range(10000, 1000000)->Complexity();

void BM_Knn64(benchmark::State& state) {
    const auto positions = uniform_positions(
        static_cast<std::size_t>(state.range(0)), 2);
    const kdss::KdTree tree(positions);
    kdss::SeededRng rng(3);
    for (auto _ : state) {
        const kdss::Vec3 q{rng.unit(), rng.unit(), rng.unit()};
        benchmark::DoNotOptimize(tree.knn(q, 64));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Knn64)->RangeMultiplier(10)->Range(10000, 1000000)->Complexity();

// The sublinearity check: tree query vs linear scan at 10^6 points, k=4096.
void BM_Knn4096_Tree(benchmark::State& state) {
    const auto positions = uniform_positions(1000000, 4);
    const kdss::KdTree tree(positions);
    kdss::SeededRng rng(5);
    for (auto _ : state) {
        const kdss::Vec3 q{rng.unit(), rng.unit(), rng.unit()};
        benchmark::DoNotOptimize(tree.knn(q, 4096));
    }
}
BENCHMARK(BM_Knn4096_Tree);

void BM_Knn4096_LinearScan(benchmark::State& state) {
    const auto positions = uniform_positions(1000000, 4);
    kdss::SeededRng rng(5);
    for (auto _ : state) {
        const kdss::Vec3 q{rng.unit(), rng.unit(), rng.unit()};
        benchmark::DoNotOptimize(kdss::brute_force_knn(positions, {}, q, 4096));
    }
}
BENCHMARK(BM_Knn4096_LinearScan);

}  // namespace

BENCHMARK_MAIN();
