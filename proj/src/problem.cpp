#include "rncg/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rncg/errors.hpp"
#include "rncg/subproblem.hpp"

namespace rncg {

namespace {

void check_point(const UncertainProblem& problem, const Vector& x) {
  if (x.size() != problem.n) {
    std::ostringstream os;
    os << problem.name << ": point has dimension " << x.size() << ", expected " << problem.n;
    throw std::invalid_argument(os.str());
  }
  if (!x.allFinite()) throw std::invalid_argument(problem.name + ": point is not finite");
}

void check_pair(const UncertainProblem& problem, int j, int i) {
  if (j < 0 || j >= problem.m || i < 0 || i >= problem.p)
    throw std::out_of_range(problem.name + ": objective/scenario index out of range");
}

double evaluate_one(const UncertainProblem& problem, const Vector& x, int j, int i,
                    EvalCounter* counter) {
  const double v = problem.value_fn(x, j, i);
  if (counter) ++counter->fun;
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << problem.name << ": non-finite value for objective " << j << ", scenario " << i;
    throw EvaluationError(os.str(), j, i, x);
  }
  return v;
}

}  // namespace

void UncertainProblem::validate() const {
  if (n <= 0 || m <= 0 || p <= 0) throw std::invalid_argument(name + ": dimensions must be positive");
  if (lower_bound.size() != n || upper_bound.size() != n)
    throw std::invalid_argument(name + ": bound dimension mismatch");
  if ((lower_bound.array() > upper_bound.array()).any())
    throw std::invalid_argument(name + ": lower bound exceeds upper bound");
  if (static_cast<int>(scenarios.size()) != p)
    throw std::invalid_argument(name + ": scenario count mismatch");
  if (!value_fn) throw std::invalid_argument(name + ": missing value evaluator");
}

Matrix evaluate_scenarios(const UncertainProblem& problem, const Vector& x,
                          EvalCounter* counter) {
  check_point(problem, x);
  Matrix values(problem.m, problem.p);
  for (int j = 0; j < problem.m; ++j)
    for (int i = 0; i < problem.p; ++i) values(j, i) = evaluate_one(problem, x, j, i, counter);
  return values;
}

RobustValue robust_from_values(Matrix values, double tau_act) {
  if (tau_act < 0.0) throw std::invalid_argument("active-set tolerance must be nonnegative");
  RobustValue rv;
  const auto m = values.rows();
  rv.robust.resize(m);
  rv.active.resize(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const double fj = values.row(j).maxCoeff();
    rv.robust[j] = fj;
    const double slack = tau_act * (1.0 + std::abs(fj));
    for (Eigen::Index i = 0; i < values.cols(); ++i)
      if (fj - values(j, i) <= slack) rv.active[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
  }
  rv.values = std::move(values);
  return rv;
}

RobustValue robust_value(const UncertainProblem& problem, const Vector& x, double tau_act,
                         EvalCounter* counter) {
  return robust_from_values(evaluate_scenarios(problem, x, counter), tau_act);
}

Vector gradient(const UncertainProblem& problem, const Vector& x, int j, int i,
                EvalCounter* counter) {
  check_point(problem, x);
  check_pair(problem, j, i);
  if (!problem.gradient_fn) return fd_gradient(problem, x, j, i, default_fd_step(x), counter);

  Vector g = problem.gradient_fn(x, j, i);
  if (counter) ++counter->grad;
  if (g.size() != problem.n || !g.allFinite()) {
    std::ostringstream os;
    os << problem.name << ": non-finite gradient for objective " << j << ", scenario " << i;
    throw GradientError(os.str(), j, i, x);
  }
  return g;
}

Vector fd_gradient(const UncertainProblem& problem, const Vector& x, int j, int i,
                   double step, EvalCounter* counter) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  check_point(problem, x);
  check_pair(problem, j, i);
  const double base = evaluate_one(problem, x, j, i, counter);
  Vector g(problem.n);
  Vector xs = x;
  for (int k = 0; k < problem.n; ++k) {
    xs[k] = x[k] + step;
    g[k] = (evaluate_one(problem, xs, j, i, counter) - base) / step;
    xs[k] = x[k];
  }
  return g;
}

CriticalityCertificate criticality_certificate(const UncertainProblem& problem,
                                               const Vector& x, double tau_act,
                                               double eps_crit, EvalCounter* counter) {
  const RobustValue rv = robust_value(problem, x, tau_act, counter);

  CriticalityCertificate cert;
  for (int j = 0; j < problem.m; ++j)
    for (int i : rv.active[static_cast<std::size_t>(j)]) cert.active_pairs.emplace_back(j, i);

  // Zero offsets on the active pairs turn the direction dual into the
  // minimum-norm point of their convex hull.
  LinearizedModel model;
  const auto k = static_cast<Eigen::Index>(cert.active_pairs.size());
  model.offsets = Vector::Zero(k);
  model.gradients.resize(problem.n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto [j, i] = cert.active_pairs[static_cast<std::size_t>(c)];
    model.gradients.col(c) = gradient(problem, x, j, i, counter);
  }
  const DirectionSolution sol = solve_direction(model);
  cert.witness_weights = sol.lambda;
  cert.min_norm = sol.s.norm();
  cert.is_critical = cert.min_norm <= eps_crit;
  return cert;
}

}  // namespace rncg
