#include <benchmark/benchmark.h>

#include "hybridbell/chsh.hpp"
#include "hybridbell/coefficients.hpp"
#include "hybridbell/fock_oracle.hpp"

using namespace hybridbell;

static void BM_C1Quadrature(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(c1(alpha, 0.8, 0.9));
}
BENCHMARK(BM_C1Quadrature)->Arg(5)->Arg(21)->Arg(90);

static void BM_ClosedFormMax(benchmark::State& state) {
  const auto co = photocount_coefficients(2.1, {}, optimal_bin(2.1, 1.0), LossConvention::BornRule);
  for (auto _ : state) benchmark::DoNotOptimize(s_max_closed(co));
}
BENCHMARK(BM_ClosedFormMax);

static void BM_MaxOverAlpha(benchmark::State& state) {
  const Scenario scenario{state.range(0) ? ScenarioKind::TwoHomodyne : ScenarioKind::Photocount};
  for (auto _ : state) benchmark::DoNotOptimize(s_max_over_alpha({0.9, 1.0, 1.0}, scenario));
}
BENCHMARK(BM_MaxOverAlpha)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_MaxAtomic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(s_max_atomic({1.0, 1.0, 0.9}));
}
BENCHMARK(BM_MaxAtomic)->Unit(benchmark::kMillisecond);

static void BM_XBinOperator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::x_bin_operator(0.6, n));
}
BENCHMARK(BM_XBinOperator)->Arg(20)->Arg(68)->Unit(benchmark::kMillisecond);

static void BM_OracleCoefficients(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(oracle::twohomodyne_coefficients(3.0, 0.8, 0.5, 1.5));
}
BENCHMARK(BM_OracleCoefficients)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
