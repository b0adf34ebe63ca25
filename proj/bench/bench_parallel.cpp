// Serial reference vs OpenMP kernels for the two data-parallel loops:
// per-sample ensemble evaluation and per-trial witness search.

#include <benchmark/benchmark.h>

#include "undistill/channels.hpp"
#include "undistill/distill.hpp"
#include "undistill/sampling.hpp"

namespace {

using namespace undistill;

EnsembleSpec bench_spec(std::size_t n) {
  EnsembleSpec spec;
  spec.d_a = 2;
  spec.d_b = 4;
  spec.d_e = 3;
  spec.n_samples = n;
  spec.seed = 7;
  return spec;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampling::run_low_rank_ensemble_serial(spec, 50));
  }
}
BENCHMARK(BM_EnsembleSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EnsembleParallel(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampling::run_low_rank_ensemble(spec, 50));
  }
}
BENCHMARK(BM_EnsembleParallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

// Exhaustive search: the Example 1 complement never yields a witness, so
// every trial runs.
DensityMatrix no_witness_state() {
  return channels::complement_channel(channels::example1_channel(3, 0.5)).choi();
}

void BM_WitnessSerial(benchmark::State& state) {
  const DensityMatrix rho = no_witness_state();
  const auto budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(distill::one_way_witness_search_serial(rho, budget, 0));
  }
}
BENCHMARK(BM_WitnessSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_WitnessParallel(benchmark::State& state) {
  const DensityMatrix rho = no_witness_state();
  const auto budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(distill::one_way_witness_search(rho, budget, 0));
  }
}
BENCHMARK(BM_WitnessParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
