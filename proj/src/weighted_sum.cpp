#include "rncg/weighted_sum.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "rncg/rng.hpp"

namespace rncg {

void WeightVector::validate() const {
  if (a.size() == 0) throw std::invalid_argument("empty weight vector");
  if (!a.allFinite() || a.minCoeff() < 0.0) throw std::invalid_argument("weights must be finite and >= 0");
  if (!(a.sum() > 0.0)) throw std::invalid_argument("weights must not all be zero");
}

UncertainProblem tuple_expand(const UncertainProblem& problem, const WeightVector& weights) {
  problem.validate();
  weights.validate();
  if (weights.a.size() != problem.m) throw std::invalid_argument("weight vector has the wrong length");

  std::int64_t tuples = 1;
  for (int j = 0; j < problem.m; ++j) {
    tuples *= problem.p;
    if (tuples > kMaxTuples)
      throw std::invalid_argument("tuple expansion exceeds " + std::to_string(kMaxTuples) + " scenarios");
  }

  const int m = problem.m, p = problem.p;
  std::vector<Vector> index_vectors;
  index_vectors.reserve(static_cast<std::size_t>(tuples));
  for (std::int64_t t = 0; t < tuples; ++t) {
    Vector idx(m);
    std::int64_t rest = t;
    for (int j = m - 1; j >= 0; --j) {
      idx[j] = static_cast<double>(rest % p);
      rest /= p;
    }
    index_vectors.push_back(std::move(idx));
  }

  UncertainProblem out;
  out.name = problem.name + "/weighted";
  out.n = problem.n;
  out.m = 1;
  out.p = static_cast<int>(tuples);
  out.lower_bound = problem.lower_bound;
  out.upper_bound = problem.upper_bound;
  out.scenarios = index_vectors;

  const Vector a = weights.a;
  out.value_fn = [problem, a, index_vectors](const Vector& x, int, int t) {
    const Vector& idx = index_vectors[static_cast<std::size_t>(t)];
    double sum = 0.0;
    for (int j = 0; j < problem.m; ++j)
      sum += a[j] * problem.value_fn(x, j, static_cast<int>(idx[j]));
    return sum;
  };
  out.gradient_fn = [problem, a, index_vectors](const Vector& x, int, int t) {
    const Vector& idx = index_vectors[static_cast<std::size_t>(t)];
    Vector g = Vector::Zero(problem.n);
    for (int j = 0; j < problem.m; ++j) {
      if (a[j] == 0.0) continue;
      g += a[j] * gradient(problem, x, j, static_cast<int>(idx[j]));
    }
    return g;
  };
  return out;
}

SolverConfig weighted_default_config() {
  SolverConfig c;
  c.gamma_rule = GammaRule::Zero;
  return c;
}

RunResult solve_weighted(const UncertainProblem& problem, const WeightVector& weights,
                         const std::optional<Vector>& x0, const SolverConfig& config) {
  const UncertainProblem expanded = tuple_expand(problem, weights);
  SolverConfig scaled = config;
  scaled.eps_crit *= std::min(1.0, weights.a.sum());
  RunResult r = solve(expanded, x0.value_or(problem.center()), scaled);
  try {
    r.final_F = robust_value(problem, r.final_x, config.tau_act).robust;
  } catch (const EvaluationError& e) {
    r.final_F = Vector::Constant(problem.m, std::numeric_limits<double>::quiet_NaN());
    if (r.message.empty()) r.message = e.what();
  }
  return r;
}

WeightSchedule generate_weights(int m, int count, std::uint64_t seed) {
  if (m != 2 && m != 3) throw std::invalid_argument("weight schedules support m = 2 or 3");
  if (count < m) throw std::invalid_argument("weight count must cover the unit vectors");
  WeightSchedule s;
  s.seed = seed;
  for (int j = 0; j < m; ++j) s.weights.push_back({Vector::Unit(m, j)});
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  while (static_cast<int>(s.weights.size()) < count) {
    Vector a(m);
    for (int j = 0; j < m; ++j) a[j] = rng.uniform();
    if (!(a.sum() > 0.0)) continue;
    s.weights.push_back({std::move(a)});
  }
  return s;
}

}  // namespace rncg
