#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "rncg/problem.hpp"

namespace testing {

// One-objective, one-scenario problem from a scalar function of x.
inline rncg::UncertainProblem smooth_problem(int n, std::function<double(const rncg::Vector&)> f,
                                             std::function<rncg::Vector(const rncg::Vector&)> g) {
  rncg::UncertainProblem p;
  p.name = "smooth";
  p.n = n;
  p.m = 1;
  p.p = 1;
  p.scenarios = {rncg::Vector::Zero(1)};
  p.lower_bound = rncg::Vector::Constant(n, -1.0);
  p.upper_bound = rncg::Vector::Constant(n, 1.0);
  p.value_fn = [f](const rncg::Vector& x, int, int) { return f(x); };
  if (g) p.gradient_fn = [g](const rncg::Vector& x, int, int) { return g(x); };
  return p;
}

inline rncg::UncertainProblem square_problem() {
  return smooth_problem(
      1, [](const rncg::Vector& x) { return x[0] * x[0]; },
      [](const rncg::Vector& x) { return rncg::Vector::Constant(1, 2.0 * x[0]); });
}

inline rncg::Vector v1(double a) { return rncg::Vector::Constant(1, a); }

inline rncg::Vector vec(std::initializer_list<double> xs) {
  rncg::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

}  // namespace testing
