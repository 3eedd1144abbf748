// Serial reference vs fast kernel vs OpenMP for the hot paths.

#include <benchmark/benchmark.h>

#include "bellviol/correlation.hpp"
#include "bellviol/violation.hpp"

using namespace bellviol;

namespace {

void BM_TensorReference(benchmark::State& state) {
  const DensityMatrix rho = random_mixed_state(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_tensor_reference(rho));
}

void BM_TensorSerial(benchmark::State& state) {
  const DensityMatrix rho = random_mixed_state(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_tensor(rho, Execution::serial));
}

void BM_TensorParallel(benchmark::State& state) {
  const DensityMatrix rho = random_mixed_state(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_tensor(rho, Execution::parallel));
}

void BM_Reconstruct(benchmark::State& state) {
  const auto t = correlation_tensor(random_mixed_state(static_cast<int>(state.range(0)), 2));
  const auto exec = state.range(1) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_density(t, exec));
}

void BM_Formula(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = random_mixed_state(n, 3);
  OptimizerConfig cfg;
  cfg.exec = state.range(1) ? Execution::parallel : Execution::serial;
  const auto spec = BellOperatorSpec::recursive(n, family_size(n));
  for (auto _ : state) benchmark::DoNotOptimize(max_violation_formula(rho, spec, cfg));
}

void BM_Oracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = random_mixed_state(n, 4);
  OptimizerConfig cfg;
  cfg.restarts = 32;
  cfg.exec = state.range(1) ? Execution::parallel : Execution::serial;
  const auto spec = BellOperatorSpec::recursive(n, family_size(n));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_max_violation(rho, spec, cfg));
}

}  // namespace

BENCHMARK(BM_TensorReference)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TensorSerial)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TensorParallel)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reconstruct)->ArgsProduct({{3, 5, 7}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Formula)->ArgsProduct({{3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
