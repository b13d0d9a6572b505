#include "rncg/batch.hpp"

#include <omp.h>

#include <exception>
#include <functional>

#include "rncg/rng.hpp"

namespace rncg {

namespace {

RunOutcome guarded(const std::function<RunResult()>& body) {
  RunOutcome out;
  try {
    out.result = body();
  } catch (const std::exception& e) {
    out.error = e.what();
  } catch (...) {
    out.error = "unknown exception";
  }
  return out;
}

std::vector<RunOutcome> fan_out(int count, const std::function<RunResult(int)>& body,
                                Execution exec) {
  std::vector<RunOutcome> out(static_cast<std::size_t>(count));
  if (exec == Execution::Serial) {
    for (int k = 0; k < count; ++k) out[k] = guarded([&] { return body(k); });
    return out;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < count; ++k) out[k] = guarded([&] { return body(k); });
  return out;
}

}  // namespace

Vector sample_start(const UncertainProblem& problem, std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng = SplitMix64::stream(seed, index);
  return sample_box(rng, problem.lower_bound, problem.upper_bound);
}

std::vector<Vector> sample_starts(const UncertainProblem& problem, int count, std::uint64_t seed) {
  std::vector<Vector> starts;
  starts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) starts.push_back(sample_start(problem, seed, static_cast<std::uint64_t>(k)));
  return starts;
}

std::vector<RunOutcome> run_multistart(const UncertainProblem& problem,
                                       const std::vector<Vector>& starts,
                                       const SolverConfig& config, Execution exec) {
  return fan_out(
      static_cast<int>(starts.size()),
      [&](int k) { return solve(problem, starts[static_cast<std::size_t>(k)], config); }, exec);
}

std::vector<RunOutcome> run_weight_schedule(const UncertainProblem& problem,
                                            const WeightSchedule& schedule,
                                            const std::optional<Vector>& x0,
                                            const SolverConfig& config, Execution exec) {
  return fan_out(
      static_cast<int>(schedule.weights.size()),
      [&](int k) {
        return solve_weighted(problem, schedule.weights[static_cast<std::size_t>(k)], x0, config);
      },
      exec);
}

int parallel_workers() { return omp_get_max_threads(); }

}  // namespace rncg
