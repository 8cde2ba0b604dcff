#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "iktsne/distance.hpp"
#include "iktsne/gaussian_affinity.hpp"
#include "iktsne/isolation_kernel.hpp"
#include "iktsne/optimizer.hpp"

namespace {

iktsne::DataMatrix uniform_2d(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> values(n * 2);
    for (auto& v : values) {
        v = u(eng);
    }
    return iktsne::DataMatrix::dense(2, std::move(values));
}

void BM_GaussianAffinity(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = uniform_2d(n, 1);
    const auto dists = iktsne::DistanceTable::build(data);
    iktsne::PerplexityConfig cfg;
    cfg.perplexity = 30.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(iktsne::gaussian_affinities(dists, cfg));
    }
}
BENCHMARK(BM_GaussianAffinity)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_IsolationAffinity(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = uniform_2d(n, 1);
    const auto dists = iktsne::DistanceTable::build(data);
    iktsne::IsolationConfig cfg;
    cfg.psi = n / 20;
    cfg.t = 200;
    cfg.seed = 3;
    for (auto _ : state) {
        const auto forest = iktsne::build_forest(data, cfg);
        benchmark::DoNotOptimize(iktsne::isolation_affinities(forest, dists));
    }
}
BENCHMARK(BM_IsolationAffinity)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MappingIterations(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = uniform_2d(n, 1);
    iktsne::PerplexityConfig pcfg;
    pcfg.perplexity = 30.0;
    const auto p = iktsne::gaussian_affinities(iktsne::DistanceTable::build(data), pcfg);
    iktsne::OptimizerConfig cfg;
    cfg.iterations = 20;
    cfg.exaggeration_iters = 10;
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(iktsne::run_tsne(p, cfg));
    }
}
BENCHMARK(BM_MappingIterations)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DistanceTable(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = uniform_2d(n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(iktsne::DistanceTable::build(data));
    }
}
BENCHMARK(BM_DistanceTable)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
