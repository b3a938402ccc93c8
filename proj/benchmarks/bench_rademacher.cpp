#include <benchmark/benchmark.h>

#include "eqbound/empirical.hpp"
#include "eqbound/instances.hpp"

using namespace eqbound;

static void BM_ExactRademacher(benchmark::State& state) {
    auto inst = make_random_instance(5);
    const auto sample = draw_sample(inst.dist, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(empirical_rademacher(inst.cls, sample, 0, 0).estimate);
    }
}
BENCHMARK(BM_ExactRademacher)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ChainingBound(benchmark::State& state) {
    auto inst = make_random_instance(5);
    const auto sample = draw_sample(inst.dist, 50, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(explicit_generalization_bound(inst.cls, sample, 0.1).total);
    }
}
BENCHMARK(BM_ChainingBound)->Unit(benchmark::kMillisecond);
