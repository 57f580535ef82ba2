#include <benchmark/benchmark.h>

#include "kdss/random.hpp"
#include "kdss/subsample.hpp"

namespace {

kdss::PointCloud uniform_cloud(std::size_t n, std::uint64_t seed) {
    kdss::SeededRng rng(seed);
    kdss::PointCloud cloud;
    cloud.positions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        cloud.positions.push_back({rng.unit(), rng.unit(), rng.unit()});
    }
    return cloud;
}

void BM_Subsample(benchmark::State& state) {
    const auto cloud = uniform_cloud(
        static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        const kdss::SubSampleSet set =
            kdss::subsample(cloud, {.n_per_sample = 4096, .seed = 1});
        benchmark::DoNotOptimize(set.subsamples.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Subsample)
    ->RangeMultiplier(10)
    ->Range(10000, 1000000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_SubsampleSmallN(benchmark::State& state) {
    const auto cloud = uniform_cloud(100000, 8);
    for (auto _ : state) {
        const kdss::SubSampleSet set = kdss::subsample(
            cloud, {.n_per_sample = static_cast<std::size_t>(state.range(0)),
                    .seed = 2});
        benchmark::DoNotOptimize(set.subsamples.size());
    }
}
BENCHMARK(BM_SubsampleSmallN)
    ->Arg(64)
    ->Arg(512)
    ->Arg(4096)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
