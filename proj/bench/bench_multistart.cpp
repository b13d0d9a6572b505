// Serial reference vs OpenMP kernel on the multi-start and weight fan-outs.

#include <benchmark/benchmark.h>

#include "rncg/batch.hpp"
#include "rncg/suite.hpp"
#include "rncg/weighted_sum.hpp"

namespace {

using namespace rncg;

const char* const kProblems[] = {"tp2", "tp5", "tp13", "tp16"};

void multistart(benchmark::State& state, Execution exec) {
  const auto p = suite::build(kProblems[state.range(0)]);
  const auto starts = sample_starts(p, 32, 0);
  SolverConfig config;
  config.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_multistart(p, starts, config, exec));
  state.SetLabel(p.name);
  state.counters["workers"] = exec == Execution::Parallel ? parallel_workers() : 1;
}

void weights(benchmark::State& state, Execution exec) {
  const auto p = suite::build(kProblems[state.range(0)]);
  const auto schedule = generate_weights(p.m, 32, 0);
  SolverConfig config = weighted_default_config();
  config.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_weight_schedule(p, schedule, std::nullopt, config, exec));
  state.SetLabel(p.name);
}

}  // namespace

BENCHMARK_CAPTURE(multistart, serial, Execution::Serial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(multistart, parallel, Execution::Parallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(weights, serial, Execution::Serial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(weights, parallel, Execution::Parallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
