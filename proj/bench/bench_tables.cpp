// Serial reference vs OpenMP kernel for mean-d.f. table generation.

#include <benchmark/benchmark.h>

#include "effdf/calibration.hpp"
#include "effdf/sampling.hpp"

namespace {

effdf::SimulationGrid bench_grid() { return effdf::SimulationGrid::dense(10, 10, 2000, 7); }

void BM_TableSerial(benchmark::State& state) {
  const auto grid = bench_grid();
  for (auto _ : state) {
    auto t = effdf::reference::generate_table(grid, effdf::Method::recommended());
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_TableSerial)->Unit(benchmark::kMillisecond);

void BM_TableParallel(benchmark::State& state) {
  const auto grid = bench_grid();
  for (auto _ : state) {
    auto t = effdf::generate_table(grid, effdf::Method::recommended(), {static_cast<int>(state.range(0))});
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_TableParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_PublishedGridLargeCell(benchmark::State& state) {
  effdf::SimulationGrid grid{{160}, {80}, 1000, 7};
  for (auto _ : state) {
    auto t = effdf::generate_table(grid, effdf::Method::satterthwaite(), {static_cast<int>(state.range(0))});
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_PublishedGridLargeCell)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_X2Curve(benchmark::State& state) {
  const auto grid = effdf::SimulationGrid::dense(5, 5, 2000, 7);
  const auto c_grid = effdf::make_c_grid(2.01, 3.19, 0.01);
  for (auto _ : state) {
    auto curve = effdf::evaluate_x2_curve(c_grid, grid);
    benchmark::DoNotOptimize(curve);
  }
}
BENCHMARK(BM_X2Curve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
