#include <benchmark/benchmark.h>

#include "switchquad/lyapunov.hpp"
#include "switchquad/presets.hpp"
#include "switchquad/scenario_io.hpp"
#include "switchquad/simulation.hpp"
#include "switchquad/switching.hpp"

using namespace switchquad;

static void BM_SimulateOneSecond(benchmark::State& state) {
  const sim::Scenario sc = io::with_horizon(presets::paper_s5(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate(sc));
}
BENCHMARK(BM_SimulateOneSecond)->Unit(benchmark::kMillisecond);

static void BM_SolveLyapunov(benchmark::State& state) {
  const Mat8 a = control::build_closed_loop(200.0 * Mat4::Identity(), 140.0 * Mat4::Identity());
  const Mat8 q = 2.0 * Mat8::Identity();
  for (auto _ : state) benchmark::DoNotOptimize(control::solve_lyapunov(a, q));
}
BENCHMARK(BM_SolveLyapunov);

static void BM_AdtCertify(benchmark::State& state) {
  switching::SwitchSchedule s;
  for (int i = 0; i < state.range(0); ++i) s.events.push_back({7.0 * i, static_cast<std::size_t>(i % 3)});
  s.horizon_end = 7.0 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(switching::adt_certify(s, 7.0, 3));
}
BENCHMARK(BM_AdtCertify)->Arg(10)->Arg(1000);

BENCHMARK_MAIN();
