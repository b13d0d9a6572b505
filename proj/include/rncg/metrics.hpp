#pragma once

// Front post-processing and solver comparison metrics.

#include <string>
#include <vector>

#include "rncg/linalg.hpp"

namespace rncg {

struct FrontPoint {
  Vector x;
  Vector F;
  std::string source;  // e.g. "start-17" or "weight-3"
  double certificate_norm = 0.0;
};

struct FrontArchive {
  std::string problem_id;
  std::string solver_id;
  std::vector<FrontPoint> points;

  /// Keeps the nondominated points, deduplicated, in their original order.
  void filter(double dedupe_tol = 1e-10);
  std::vector<Vector> objective_vectors() const;
};

/// a <= b componentwise and a != b.
bool dominates(const Vector& a, const Vector& b);

/// Indices of the nondominated points in input order. Of several identical
/// vectors only the first is kept.
std::vector<std::size_t> nondominated_filter(const std::vector<Vector>& points);

/// Indices of points not within `tol` (componentwise) of an earlier kept point.
std::vector<std::size_t> dedupe(const std::vector<Vector>& points, double tol = 1e-10);

struct Extremes {
  Vector best;   // componentwise min over the union
  Vector worst;  // componentwise max over the union
};

/// Throws std::invalid_argument if every front is empty.
Extremes union_extremes(const std::vector<std::vector<Vector>>& fronts);

/// Spread metric. Throws UndefinedMetric for fewer than two points or a zero
/// denominator.
double delta_spread(const std::vector<Vector>& front, const Extremes& extremes);

struct HypervolumeResult {
  double value = 0.0;
  int excluded = 0;  // points not strictly dominating the reference
};

/// Exact hypervolume for m = 2 (sweep) and m = 3 (slicing).
HypervolumeResult hypervolume(const std::vector<Vector>& front, const Vector& reference);

/// worst + 10% of the union range per objective (at least 1e-6).
Vector reference_point(const Extremes& extremes);

struct ProfileTable {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  Matrix costs;   // problems x solvers; +inf marks a failure
  Matrix ratios;  // problems x solvers
  std::vector<double> tau;
  Matrix rho;     // tau.size() x solvers

  /// Exact step-function value, independent of the sampled grid.
  double rho_at(std::size_t solver, double t) const;
};

/// Non-finite or non-positive costs count as failures (ratio +inf).
ProfileTable performance_profile(const Matrix& costs, std::vector<std::string> solvers,
                                 std::vector<std::string> problems, int samples = 512,
                                 double tau_cap = 1e3);

}  // namespace rncg
