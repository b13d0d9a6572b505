#pragma once

// Direction-finding subproblem
//
//   min_v  h(x, v) + 1/2 ||v||^2,   h(x, v) = max_{j,i} ( c_ji + g_ji^T v ),
//
// with offsets c_ji = h_j(x, w_i) - F_j(x) <= 0 and g_ji = grad h_j(x, w_i).
// It is solved through its dual over the unit simplex,
//
//   max_{lambda in simplex}  c^T lambda - 1/2 ||G lambda||^2,   s = -G lambda,
//
// by accelerated projected-gradient ascent followed by an exact solve on the
// detected support.

#include <vector>

#include "rncg/errors.hpp"
#include "rncg/linalg.hpp"
#include "rncg/problem.hpp"

namespace rncg {

/// Affine pieces of h(x, .), stored j-major / i-minor.
struct LinearizedModel {
  Vector offsets;    // length K
  Matrix gradients;  // n x K, column k = g_k

  int pieces() const { return static_cast<int>(offsets.size()); }
  int dim() const { return static_cast<int>(gradients.rows()); }
};

struct DirectionSolution {
  Vector s;
  double T = 0.0;
  double h_at_s = 0.0;
  Vector lambda;
  KktResiduals kkt;
  int iterations = 0;
};

struct DualSolverOptions {
  int max_iterations = 10000;
  int power_iterations = 30;
  double pg_tolerance = 1e-10;
  double gap_tolerance = 1e-9;
  // After this many unconverged iterations the exact active-set method takes
  // over from the current iterate. Negative disables the hand-off.
  int active_set_after = 200;
};

LinearizedModel build_model(const UncertainProblem& problem, const Vector& x,
                            const RobustValue& robust, EvalCounter* counter = nullptr);

/// h(x, v) for the model's x.
double model_value(const LinearizedModel& model, const Vector& v);

DirectionSolution solve_direction(const LinearizedModel& model,
                                  const DualSolverOptions& options = {});

/// Euclidean projection onto {lambda >= 0, sum lambda = 1}.
Vector project_simplex(const Vector& y);

/// Recomputes all residuals from scratch; never throws.
KktResiduals verify_kkt(const LinearizedModel& model, const DirectionSolution& solution);

}  // namespace rncg
