#include <benchmark/benchmark.h>

#include "dwell/morse.hpp"
#include "dwell/numerics.hpp"
#include "dwell/oracle.hpp"
#include "dwell/squarewell.hpp"

namespace {

void BM_KummerSeries(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dwell::kummer_m(-2.3, 1.7, x));
    x = x < 20.0 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_KummerSeries);

void BM_KummerLargeNegative(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dwell::kummer_m(0.75, 1.5, -60.0));
}
BENCHMARK(BM_KummerLargeNegative);

void BM_SquareTransmission(benchmark::State& state) {
  const dwell::SquareWell well{};
  for (auto _ : state) benchmark::DoNotOptimize(dwell::transmission(well, 2.5));
}
BENCHMARK(BM_SquareTransmission);

void BM_SquareSpectrum(benchmark::State& state) {
  dwell::SquareWell well{};
  well.U0 = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dwell::solve_spectrum(well));
}
BENCHMARK(BM_SquareSpectrum)->Arg(5)->Arg(100)->Arg(10000);

void BM_MorseSpectrum(benchmark::State& state) {
  const dwell::MorsePair morse{};
  for (auto _ : state) benchmark::DoNotOptimize(dwell::solve_oscillation_spectrum(morse));
}
BENCHMARK(BM_MorseSpectrum)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const dwell::GridProblem problem = dwell::make_grid_problem(dwell::SquareWell{}, {}, 4, points);
  for (auto _ : state) benchmark::DoNotOptimize(dwell::solve_grid(problem, 4));
}
BENCHMARK(BM_Oracle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
