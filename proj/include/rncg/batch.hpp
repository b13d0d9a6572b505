#pragma once

// Fan-out of independent solver runs (multi-start, weight schedules).
// Every run writes only its own slot, so the OpenMP kernel and the serial
// reference produce identical results in identical order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rncg/cg.hpp"
#include "rncg/weighted_sum.hpp"

namespace rncg {

enum class Execution { Serial, Parallel };

struct RunOutcome {
  std::optional<RunResult> result;  // empty if the run threw
  std::string error;
};

/// Start point `index` drawn uniformly from [lb, ub] with its own stream.
Vector sample_start(const UncertainProblem& problem, std::uint64_t seed, std::uint64_t index);

std::vector<Vector> sample_starts(const UncertainProblem& problem, int count, std::uint64_t seed);

std::vector<RunOutcome> run_multistart(const UncertainProblem& problem,
                                       const std::vector<Vector>& starts,
                                       const SolverConfig& config, Execution exec);

std::vector<RunOutcome> run_weight_schedule(const UncertainProblem& problem,
                                            const WeightSchedule& schedule,
                                            const std::optional<Vector>& x0,
                                            const SolverConfig& config, Execution exec);

/// Worker count the parallel kernel would use.
int parallel_workers();

}  // namespace rncg
