#include <benchmark/benchmark.h>

#include "cavity/hardwall.hpp"
#include "cavity/kummer.hpp"
#include "cavity/pde_oracle.hpp"
#include "cavity/perturbative.hpp"
#include "cavity/sqrtlaw.hpp"

using namespace cavity;

static void BM_JTable(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(JTable(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_JTable)->Arg(64)->Arg(256);

static void BM_KummerBasis(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(KummerBasis(0.25, static_cast<int>(st.range(0))).roots());
}
BENCHMARK(BM_KummerBasis)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_HardWallSample(benchmark::State& st) {
  const HardWallEngine eng(WallSchedule::linear(1.0, 0.05), 1, 64);
  for (auto _ : st) benchmark::DoNotOptimize(eng.sample(1.0).force.total);
}
BENCHMARK(BM_HardWallSample);

static void BM_SqrtLawEngine(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(SqrtLawEngine(WallSchedule::sqrt_law_from_initial(1.0, 0.05, 0.01), 1, 64).sample(1.0));
}
BENCHMARK(BM_SqrtLawEngine)->Unit(benchmark::kMillisecond);

// 100 Crank-Nicolson steps
static void BM_PdeSteps(benchmark::State& st) {
  OracleConfig c;
  c.schedule = WallSchedule::linear(1.0, 0.05);
  c.grid_points = static_cast<int>(st.range(0));
  c.dt = 1e-4;
  for (auto _ : st) {
    PdeOracle o(c);
    o.advance_to(1e-2);
    benchmark::DoNotOptimize(o.state().values.data());
  }
}
BENCHMARK(BM_PdeSteps)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_CoefficientC(benchmark::State& st) {
  const auto occ = OccupationModel::zero_temperature(5);
  for (auto _ : st) benchmark::DoNotOptimize(coefficient_C(occ, static_cast<int>(st.range(0))).value);
}
BENCHMARK(BM_CoefficientC)->Arg(1000)->Arg(10000);

static void BM_PerturbativeForce(benchmark::State& st) {
  const auto occ = OccupationModel::zero_temperature(3);
  const auto s = WallSchedule::linear(1.0, 0.01);
  for (auto _ : st) benchmark::DoNotOptimize(perturbative_force(occ, s, 1.0, static_cast<int>(st.range(0))).total());
}
BENCHMARK(BM_PerturbativeForce)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
