#include <benchmark/benchmark.h>

#include "eqbound/kt_lattice.hpp"
#include "eqbound/metric_space.hpp"

using namespace eqbound;

static void BM_LatticeEnumeration(benchmark::State& state) {
    const auto path = make_path_space(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lipschitz_lattice(path, 2.0, 0.125).size());
    }
}
BENCHMARK(BM_LatticeEnumeration)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_GreedySupCover(benchmark::State& state) {
    const auto path = make_path_space(3);
    const auto fns = lipschitz_lattice(path, 2.0, 0.125);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_cover_upper(fns, 0.25, 0.125));
    }
}
BENCHMARK(BM_GreedySupCover)->Unit(benchmark::kMillisecond);
