#pragma once

// Finite-scenario uncertain multiobjective problems and their objective-wise
// worst-case counterpart F_j(x) = max_i h_j(x, w_i).
//
// Objective and scenario indices are zero-based throughout the library.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rncg/linalg.hpp"

namespace rncg {

/// Per-run tally of evaluator calls. One `fun` unit is one h_j(x, w_i) call.
struct EvalCounter {
  std::int64_t fun = 0;
  std::int64_t grad = 0;

  EvalCounter& operator+=(const EvalCounter& o) {
    fun += o.fun;
    grad += o.grad;
    return *this;
  }
};

using ValueFn = std::function<double(const Vector& x, int j, int i)>;
using GradientFn = std::function<Vector(const Vector& x, int j, int i)>;

/// Immutable after construction; safe to share between threads.
struct UncertainProblem {
  std::string name;
  int n = 0;
  int m = 0;
  int p = 0;
  std::vector<Vector> scenarios;
  Vector lower_bound;
  Vector upper_bound;
  ValueFn value_fn;
  GradientFn gradient_fn;  // empty => forward differences

  /// Checks dimensions, bounds ordering and evaluator presence.
  void validate() const;
  Vector center() const { return 0.5 * (lower_bound + upper_bound); }
};

struct RobustValue {
  Matrix values;  // m x p, entry (j, i) = h_j(x, w_i)
  Vector robust;  // robust[j] = max_i values(j, i)
  std::vector<std::vector<int>> active;
};

struct CriticalityCertificate {
  bool is_critical = false;
  /// Convex weights over `active_pairs`.
  Vector witness_weights;
  std::vector<std::pair<int, int>> active_pairs;  // (j, i)
  double min_norm = 0.0;
};

inline constexpr double kDefaultActiveTol = 1e-6;
inline constexpr double kDefaultCriticalTol = 1e-4;

Matrix evaluate_scenarios(const UncertainProblem& problem, const Vector& x,
                          EvalCounter* counter = nullptr);

/// Active index sets use the relative test F_j - h_j(x, w_i) <= tau_act (1 + |F_j|).
RobustValue robust_value(const UncertainProblem& problem, const Vector& x,
                         double tau_act = kDefaultActiveTol,
                         EvalCounter* counter = nullptr);

/// Builds robust max and active sets from an already evaluated scenario matrix.
RobustValue robust_from_values(Matrix values, double tau_act);

Vector gradient(const UncertainProblem& problem, const Vector& x, int j, int i,
                EvalCounter* counter = nullptr);

inline double default_fd_step(const Vector& x) {
  return 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
}

/// Forward difference; costs exactly n + 1 evaluator calls.
Vector fd_gradient(const UncertainProblem& problem, const Vector& x, int j, int i,
                   double step, EvalCounter* counter = nullptr);

/// Minimum-norm convex combination of the gradients of all active (j, i) pairs.
CriticalityCertificate criticality_certificate(const UncertainProblem& problem,
                                               const Vector& x,
                                               double tau_act = kDefaultActiveTol,
                                               double eps_crit = kDefaultCriticalTol,
                                               EvalCounter* counter = nullptr);

}  // namespace rncg
