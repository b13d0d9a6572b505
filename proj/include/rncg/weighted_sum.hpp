#pragma once

// Weighted-sum baseline. sum_j a_j max_i h_j(x, w_i) is rewritten as a single
// max over scenario tuples (i_1, ..., i_m) of sum_j a_j h_j(x, w_{i_j}), which
// the conjugate gradient driver then handles as a one-objective problem.

#include <cstdint>
#include <optional>
#include <vector>

#include "rncg/cg.hpp"
#include "rncg/problem.hpp"

namespace rncg {

struct WeightVector {
  Vector a;

  /// a >= 0, sum(a) > 0, all finite.
  void validate() const;
};

struct WeightSchedule {
  std::vector<WeightVector> weights;
  std::uint64_t seed = 0;
};

inline constexpr std::int64_t kMaxTuples = 10000;

/// Scenario t of the result decodes to (i_1, ..., i_m) with i_1 varying slowest;
/// its scenario vector holds those indices. Throws std::invalid_argument if
/// p^m exceeds kMaxTuples.
UncertainProblem tuple_expand(const UncertainProblem& problem, const WeightVector& weights);

/// Default configuration for the baseline: steepest descent (rule zero).
SolverConfig weighted_default_config();

/// Runs `solve` on the expanded problem from x0 (default: box center), with
/// eps_crit scaled by min(1, sum(a)) so that a certified stop carries over to
/// the unweighted objectives. final_F is re-evaluated in the original m-objective space; counts and trace
/// refer to the expanded problem.
RunResult solve_weighted(const UncertainProblem& problem, const WeightVector& weights,
                         const std::optional<Vector>& x0 = std::nullopt,
                         const SolverConfig& config = weighted_default_config());

/// Unit vectors first, then uniform samples from [0, 1]^m, unnormalized.
WeightSchedule generate_weights(int m, int count, std::uint64_t seed);

}  // namespace rncg
