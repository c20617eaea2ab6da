#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "rotnum/apdiag.hpp"
#include "rotnum/oracle.hpp"
#include "rotnum/rotation.hpp"

namespace {

using namespace rotnum;

GeneralizedPotential kronig_penney() {
  return {constant_potential(0.0), constant_sequence(2.0), periodic_lattice(1.0)};
}

GeneralizedPotential quasi_periodic() {
  return {trig_potential(0.0, {{1.0, 1.0, 0.0}, {1.0, std::numbers::sqrt2, 0.0}}),
          alternating_sequence(1.0), sine_lattice(0.5, 1.0, 0.0)};
}

// Arg: worker count; 0 selects the serial reference.

void BM_Scan(benchmark::State& state) {
  const auto p = kronig_penney();
  const auto cfg = IntegratorConfig::for_lattice(p.gamma());
  const auto grid = energy_grid(0.0, 12.0, 0.25);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rows = jobs == 0 ? scan_serial(p, grid, 0.0, 500, cfg) : scan(p, grid, 0.0, 500, cfg, jobs);
    benchmark::DoNotOptimize(rows);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_Scan)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EpsilonPeriods(benchmark::State& state) {
  const auto p = quasi_periodic();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rep = jobs == 0 ? epsilon_periods_serial(p, 0.1, 60, 200, 16)
                         : epsilon_periods(p, 0.1, 60, 200, 16, jobs);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_EpsilonPeriods)
    ->Arg(0)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_TabulatePeriodMap(benchmark::State& state) {
  const oracle::PeriodicSpec spec{kronig_penney(), 1};
  const auto cfg = IntegratorConfig::for_lattice(spec.potential.gamma());
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto table = jobs == 0 ? oracle::tabulate_period_map_serial(spec, 5.0, 1024, cfg)
                           : oracle::tabulate_period_map(spec, 5.0, 1024, cfg, jobs);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_TabulatePeriodMap)
    ->Arg(0)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_StepLattice(benchmark::State& state) {
  const auto p = quasi_periodic();
  const auto cfg = IntegratorConfig::for_lattice(p.gamma());
  double theta = 0.3;
  std::int64_t n = 0;
  for (auto _ : state) {
    theta = step_lattice(p, 2.0, theta, n++, cfg);
    benchmark::DoNotOptimize(theta);
  }
}
BENCHMARK(BM_StepLattice);

}  // namespace

BENCHMARK_MAIN();
