// Serial reference loop versus the OpenMP kernels on the two embarrassingly
// parallel workloads: a p sweep and a basin grid.

#include <benchmark/benchmark.h>

#include "aging/analysis.hpp"

namespace {

aging::SweepOptions options_for(const benchmark::State& state) {
  aging::SweepOptions opts;
  opts.execution = state.range(0) == 0 ? aging::Execution::Serial : aging::Execution::Parallel;
  return opts;
}

void BM_SweepP(benchmark::State& state) {
  const aging::ModelParams prm;
  const auto grid = aging::make_grid(0.0, 1.0, 0.002);
  const auto opts = options_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aging::sweep_p(prm, grid, {}, aging::Method::Collective, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void BM_BasinMap(benchmark::State& state) {
  const aging::ModelParams prm;
  const auto axis = aging::make_grid(0.0, 1.0, 0.02);
  const auto opts = options_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aging::basin_map(prm, 0.8, axis, axis, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(axis.size() * axis.size()));
}

void BM_CumulantSweep(benchmark::State& state) {
  aging::ModelParams prm;
  prm.dissipative_coupling = 0.0;
  const auto grid = aging::make_grid(0.0, 1.0, 0.01);
  const auto opts = options_for(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aging::sweep_p(prm, grid, {0.0, 0.0}, aging::Method::Cumulant, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

}  // namespace

// Argument 0 runs the serial reference, 1 the OpenMP path.
BENCHMARK(BM_SweepP)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BasinMap)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CumulantSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
