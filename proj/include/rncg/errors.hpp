#pragma once

#include <stdexcept>
#include <string>

#include "rncg/linalg.hpp"

namespace rncg {

/// Evaluator returned a non-finite value for objective j, scenario i at x.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, int j, int i, Vector x)
      : std::runtime_error(what), objective(j), scenario(i), point(std::move(x)) {}

  int objective;
  int scenario;
  Vector point;
};

class GradientError : public EvaluationError {
public:
  using EvaluationError::EvaluationError;
};

struct KktResiduals {
  double simplex_gap = 0.0;       // |sum(lambda) - 1|
  double min_lambda = 0.0;
  double stationarity_norm = 0.0; // ||s + sum lambda g||
  double max_primal_violation = 0.0;
  double complementarity_gap = 0.0;
};

/// Dual iteration of the direction subproblem did not certify optimality.
class SubproblemError : public std::runtime_error {
public:
  SubproblemError(const std::string& what, KktResiduals best, double gap)
      : std::runtime_error(what), residuals(best), duality_gap(gap) {}

  KktResiduals residuals;
  double duality_gap;
};

/// No step size in the backtracking sequence passed the decrease test.
class LineSearchStall : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A conjugate-gradient parameter rule was fed an exactly zero denominator.
class DegenerateDenominator : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A front metric is undefined on the given input (too few points, zero spread).
class UndefinedMetric : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace rncg
