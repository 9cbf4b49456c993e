#include <benchmark/benchmark.h>

#include "trdecomp/als.hpp"
#include "trdecomp/constructions.hpp"
#include "trdecomp/experiments.hpp"
#include "trdecomp/unfolding.hpp"

using namespace trdecomp;

namespace {

// Args: d, m, n.
void BM_Tau(benchmark::State& state) {
  const std::size_t d = state.range(0), m = state.range(1), n = state.range(2);
  const TRCores u = random_cores(d, m, Shape(d, n), 1);
  for (auto _ : state) benchmark::DoNotOptimize(tau(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shape_size(u.dims())));
}
BENCHMARK(BM_Tau)->Args({3, 9, 10})->Args({4, 27, 10})->Args({3, 16, 16})->Unit(benchmark::kMillisecond);

void BM_Alpha(benchmark::State& state) {
  const std::size_t d = state.range(0), m = state.range(1), n = state.range(2);
  const TRCores u = random_cores(d, m, Shape(d, n), 2);
  for (auto _ : state) benchmark::DoNotOptimize(alpha(u, Mode(1)));
}
BENCHMARK(BM_Alpha)->Args({3, 9, 10})->Args({4, 27, 10})->Unit(benchmark::kMillisecond);

void BM_Microstep(benchmark::State& state) {
  const std::size_t d = state.range(0), m = state.range(1), n = state.range(2);
  const DenseTensor t = tau(random_cores(d, 3, Shape(d, n), 3));
  const TRCores u = random_cores(d, m, Shape(d, n), 4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_microstep(t, u, Mode(1)));
}
BENCHMARK(BM_Microstep)->Args({3, 9, 10})->Args({4, 27, 10})->Args({3, 16, 16})->Unit(benchmark::kMillisecond);

void BM_TrapTrial(benchmark::State& state) {
  TrapExperimentConfig cfg;
  cfg.c_values = {static_cast<double>(state.range(0)) / 100.0};
  for (auto _ : state) benchmark::DoNotOptimize(run_trap_trial(cfg, 0, 0));
}
BENCHMARK(BM_TrapTrial)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
