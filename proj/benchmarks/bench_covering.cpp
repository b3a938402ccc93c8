#include <benchmark/benchmark.h>

#include "eqbound/covering.hpp"

using namespace eqbound;

static void BM_ExactCoverCycle(benchmark::State& state) {
    const auto space = make_cycle_space(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(covering_number(space, 2.0).count);
    }
}
BENCHMARK(BM_ExactCoverCycle)->Arg(16)->Arg(32)->Arg(64);

static void BM_DoublingDimensionTorus(benchmark::State& state) {
    const auto space = make_torus2d_space(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(doubling_dimension(space));
    }
}
BENCHMARK(BM_DoublingDimensionTorus)->Arg(4)->Arg(6)->Arg(8);
