#include <benchmark/benchmark.h>

#include "timeop/algebra.hpp"
#include "timeop/hft.hpp"
#include "timeop/spectral.hpp"

namespace {

void BM_FriedrichsEigensystem(benchmark::State& state) {
  const auto grid = timeop::make_grid(50.0, static_cast<int>(state.range(0)), 1.0);
  const auto tsq = timeop::tsq_friedrichs(grid);
  for (auto _ : state) benchmark::DoNotOptimize(timeop::eigensystem(tsq));
}
BENCHMARK(BM_FriedrichsEigensystem)->Arg(499)->Arg(999)->Unit(benchmark::kMillisecond);

void BM_OperatorSqrt(benchmark::State& state) {
  const auto grid = timeop::make_grid(50.0, static_cast<int>(state.range(0)), 1.0);
  const auto dec = timeop::eigensystem(timeop::tsq_friedrichs(grid));
  for (auto _ : state) benchmark::DoNotOptimize(timeop::operator_sqrt(dec));
}
BENCHMARK(BM_OperatorSqrt)->Arg(499)->Arg(999)->Unit(benchmark::kMillisecond);

void BM_CommutatorAction(benchmark::State& state) {
  const auto grid = timeop::make_grid(50.0, static_cast<int>(state.range(0)), 1.0);
  const auto ops = timeop::OperatorSet::build(grid);
  const auto f = timeop::sample(timeop::AnalyticFunction::power_exp(1, 1.0), grid);
  for (auto _ : state) benchmark::DoNotOptimize(timeop::commutator_action(ops.Tsqrt, ops.H, f.values()));
}
BENCHMARK(BM_CommutatorAction)->Arg(499)->Arg(999)->Unit(benchmark::kMillisecond);

void BM_HftForward(benchmark::State& state) {
  const auto grid = timeop::make_grid(50.0, static_cast<int>(state.range(0)), 1.0);
  const auto f = timeop::sample(timeop::AnalyticFunction::power_exp(1, 1.0), grid);
  for (auto _ : state) benchmark::DoNotOptimize(timeop::hft_forward(f, timeop::HalfPlanePoint(1.0, 1.0)));
}
BENCHMARK(BM_HftForward)->Arg(999)->Arg(1999);

}  // namespace

BENCHMARK_MAIN();
