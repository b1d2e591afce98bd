// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP kernels on the default cavity (q = 4, eps = 0.01).
#include <benchmark/benchmark.h>

#include "moore/kernels.hpp"
#include "moore/motion.hpp"
#include "moore/observables.hpp"

namespace {

using namespace moore;

const PhaseSource& exact_source()
{
    static const PhaseSource src(CavityParams::make(1.0, 0.01, 4), SolutionMethod::Exact);
    return src;
}

void BM_phase_grid_serial(benchmark::State& state)
{
    const auto ts = kernels::linspace(0.0, 100.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::phase_grid_serial(ts, exact_source()));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_phase_grid_omp(benchmark::State& state)
{
    const auto ts = kernels::linspace(0.0, 100.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::phase_grid(ts, exact_source()));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = kernels::thread_count();
}

void BM_density_serial(benchmark::State& state)
{
    const auto xs = kernels::linspace(0.0, mirror_position(20.4, exact_source().params()), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::density_over_x_serial(20.4, xs, exact_source()));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_density_omp(benchmark::State& state)
{
    const auto xs = kernels::linspace(0.0, mirror_position(20.4, exact_source().params()), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::density_over_x(20.4, xs, exact_source()));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = kernels::thread_count();
}

}  // namespace

BENCHMARK(BM_phase_grid_serial)->Arg(1 << 12)->Arg(1 << 15);
BENCHMARK(BM_phase_grid_omp)->Arg(1 << 12)->Arg(1 << 15);
BENCHMARK(BM_density_serial)->Arg(1 << 12);
BENCHMARK(BM_density_omp)->Arg(1 << 12);

BENCHMARK_MAIN();
