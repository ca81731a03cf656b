// OpenMP kernels against their serial references: grid sweeps and Monte
// Carlo. Both variants produce identical results, so only time differs.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "dampdisc/protocols.hpp"
#include "dampdisc/sweep.hpp"

namespace {

using namespace dampdisc;

SweepConfig sweep_config(const char* command, int n) {
  SweepConfig c;
  c.command = command;
  c.grid_n = n;
  return c;
}

using SweepRunner = SweepGrid (*)(const SweepConfig&);
using McRunner = McEstimate (*)(const Protocol&, std::int64_t, std::uint64_t);

void BM_Sweep(benchmark::State& state, SweepRunner run, const char* command) {
  const SweepConfig c = sweep_config(command, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run(c).values.data());
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_MonteCarlo(benchmark::State& state, McRunner run, StrategyKind kind) {
  StrategyDescriptor d;
  d.kind = kind;
  d.eta0 = 1.2;
  d.eta1 = 0.4;
  d.x = 0.9;
  d.alpha = 0.785;
  const Protocol p = make_protocol(d);
  const std::int64_t trials = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run(p, trials, 7).correct);
  state.SetItemsProcessed(state.iterations() * trials);
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sweep, fig7_parallel, &run_sweep, "fig7")->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, fig7_serial, &run_sweep_serial, "fig7")->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, fig6_parallel, &run_sweep, "fig6")->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, fig6_serial, &run_sweep_serial, "fig6")->Arg(9)->Unit(benchmark::kMillisecond);

McRunner mc_parallel = &monte_carlo_psucc;  // picks the Protocol overload

BENCHMARK_CAPTURE(BM_MonteCarlo, one_shot_parallel, mc_parallel, StrategyKind::OneShot)
    ->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MonteCarlo, one_shot_serial, &monte_carlo_psucc_serial, StrategyKind::OneShot)
    ->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MonteCarlo, feedback_parallel, mc_parallel, StrategyKind::Feedback)
    ->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MonteCarlo, feedback_serial, &monte_carlo_psucc_serial, StrategyKind::Feedback)
    ->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
