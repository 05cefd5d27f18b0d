// Microbenchmarks for the hot paths: the force model, single trim solves,
// and column / slice sweeps.  Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#include <optional>
#include <utility>

#include "mfe/envelope.hpp"
#include "mfe/flight_model.hpp"
#include "mfe/linear_analysis.hpp"
#include "mfe/params.hpp"
#include "mfe/trim.hpp"
#include "mfe/units.hpp"

using namespace mfe;

namespace {

TrimTarget desk_target(double v_kt, double psidot_degps) {
  TrimTarget t;
  t.h = 0.0;
  t.V = kt2mps(v_kt);
  t.gamma = 0.0;
  t.psidot = deg2rad(psidot_degps);
  return t;
}

void BM_StateDerivative(benchmark::State& state) {
  const AircraftParams params = default_params();
  const TrimResult trim = solve_trim(desk_target(100, 4), {}, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        state_derivative(trim.state, trim.controls, params));
  }
}
BENCHMARK(BM_StateDerivative);

void BM_TrimCold(benchmark::State& state) {
  const AircraftParams params = default_params();
  SolverConfig config;
  config.classify_stability = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_trim(desk_target(100, 4), {}, params, config));
  }
}
BENCHMARK(BM_TrimCold);

void BM_TrimWarm(benchmark::State& state) {
  const AircraftParams params = default_params();
  SolverConfig config;
  config.classify_stability = false;
  const TrimResult neighbour = solve_trim(desk_target(95, 4), {}, params, config);
  const std::pair warm{neighbour.state, neighbour.controls};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_trim(desk_target(100, 4), {}, params, config, warm));
  }
}
BENCHMARK(BM_TrimWarm);

void BM_TrimClassified(benchmark::State& state) {
  const AircraftParams params = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_trim(desk_target(100, 4), {}, params));
  }
}
BENCHMARK(BM_TrimClassified);

void BM_Linearize(benchmark::State& state) {
  const AircraftParams params = default_params();
  const TrimResult trim = solve_trim(desk_target(100, 4), {}, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearize(trim.state, trim.controls, params));
  }
}
BENCHMARK(BM_Linearize);

void BM_SweepColumn(benchmark::State& state) {
  const AircraftParams params = default_params();
  const AxisSpec v{100.0, 5.0, 1};
  const AxisSpec psd = AxisSpec::from_range(-12, 12, 1);
  SweepOptions options;
  options.parallelism = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep_slice(params, 0, 0, v, psd, {}, {}, options));
  }
}
BENCHMARK(BM_SweepColumn)->Unit(benchmark::kMillisecond);

void BM_SweepSlice(benchmark::State& state) {
  const AircraftParams params = default_params();
  const AxisSpec v = AxisSpec::from_range(60, 180, 5);
  const AxisSpec psd = AxisSpec::from_range(-12, 12, 1);
  SweepOptions options;
  options.parallelism = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep_slice(params, 0, 0, v, psd, {}, {}, options));
  }
}
BENCHMARK(BM_SweepSlice)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
