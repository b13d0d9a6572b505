#include "rncg/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <stdexcept>

namespace rncg {

LinearizedModel build_model(const UncertainProblem& problem, const Vector& x,
                            const RobustValue& robust, EvalCounter* counter) {
  if (robust.values.rows() != problem.m || robust.values.cols() != problem.p)
    throw std::invalid_argument("robust value does not match problem dimensions");
  LinearizedModel model;
  const int k = problem.m * problem.p;
  model.offsets.resize(k);
  model.gradients.resize(problem.n, k);
  int c = 0;
  for (int j = 0; j < problem.m; ++j) {
    for (int i = 0; i < problem.p; ++i, ++c) {
      model.offsets[c] = robust.values(j, i) - robust.robust[j];
      model.gradients.col(c) = gradient(problem, x, j, i, counter);
    }
  }
  return model;
}

double model_value(const LinearizedModel& model, const Vector& v) {
  if (model.pieces() == 0) throw std::invalid_argument("empty model");
  return (model.offsets + model.gradients.transpose() * v).maxCoeff();
}

Vector project_simplex(const Vector& y) {
  const auto k = y.size();
  if (k == 0) throw std::invalid_argument("cannot project an empty vector onto the simplex");
  std::vector<double> u(y.data(), y.data() + k);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index r = 0; r < k; ++r) {
    cumsum += u[static_cast<std::size_t>(r)];
    const double t = (cumsum - 1.0) / static_cast<double>(r + 1);
    if (u[static_cast<std::size_t>(r)] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

KktResiduals verify_kkt(const LinearizedModel& model, const DirectionSolution& solution) {
  KktResiduals r;
  const Vector& lambda = solution.lambda;
  r.simplex_gap = std::abs(lambda.sum() - 1.0);
  r.min_lambda = lambda.size() > 0 ? lambda.minCoeff() : 0.0;
  r.stationarity_norm = (solution.s + model.gradients * lambda).norm();
  const double level = solution.T - 0.5 * solution.s.squaredNorm();
  const Vector slack =
      (model.offsets + model.gradients.transpose() * solution.s).array() - level;
  r.max_primal_violation = std::max(0.0, slack.maxCoeff());
  r.complementarity_gap = (lambda.array() * slack.array().abs()).sum();
  return r;
}

namespace {

using XVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using XMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Scaled dual in minimisation form: f(l) = 1/2 l^T Q l - c^T l over the simplex.
struct ScaledDual {
  Matrix Q;
  Vector c;
  double L = 1.0;

  double value(const Vector& l) const { return 0.5 * l.dot(Q * l) - c.dot(l); }
  Vector grad(const Vector& l) const { return Q * l - c; }

  double pg_norm(const Vector& l) const {
    return L * (l - project_simplex(l - grad(l) / L)).norm();
  }
};

double lipschitz_estimate(const Matrix& Q, int steps) {
  Vector v = Vector::Ones(Q.rows()).normalized();
  double rq = 0.0;
  for (int it = 0; it < steps; ++it) {
    Vector w = Q * v;
    const double nw = w.norm();
    if (nw == 0.0) break;
    v = w / nw;
    rq = v.dot(Q * v);
  }
  // The Rayleigh quotient approaches the top eigenvalue from below.
  return std::max({1.05 * rq, Q.diagonal().maxCoeff(), std::numeric_limits<double>::min()});
}

// Exact minimiser of the dual on a fixed support; empty if it leaves the simplex.
std::optional<Vector> support_solve(const ScaledDual& dual, const std::vector<Eigen::Index>& support) {
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s == 0) return std::nullopt;
  Matrix kkt = Matrix::Zero(s + 1, s + 1);
  Vector rhs(s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = dual.Q(support[a], support[b]);
    kkt(a, s) = 1.0;
    kkt(s, a) = 1.0;
    rhs[a] = dual.c[support[a]];
  }
  rhs[s] = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  Vector candidate = Vector::Zero(dual.c.size());
  for (Eigen::Index a = 0; a < s; ++a) {
    if (sol[a] < -1e-12) return std::nullopt;
    candidate[support[a]] = std::max(0.0, sol[a]);
  }
  const double total = candidate.sum();
  if (!(total > 0.0)) return std::nullopt;
  return Vector(candidate / total);
}

// Tries the supports suggested by the current iterate (entries above a few
// thresholds, and the pieces with the smallest dual gradient) and keeps the
// first exact solution that is optimal for the full problem.
bool polish(const ScaledDual& dual, Vector& lambda, double tol) {
  const double top = lambda.maxCoeff();
  std::vector<std::vector<Eigen::Index>> supports;
  for (const double rel : {0.0, 1e-12, 1e-9, 1e-6, 1e-3}) {
    std::vector<Eigen::Index> sup;
    for (Eigen::Index k = 0; k < lambda.size(); ++k)
      if (lambda[k] > rel * top) sup.push_back(k);
    if (std::find(supports.begin(), supports.end(), sup) == supports.end())
      supports.push_back(std::move(sup));
  }
  const Vector g = dual.grad(lambda);
  const double gmin = g.minCoeff();
  for (const double rel : {1e-9, 1e-6}) {
    std::vector<Eigen::Index> sup;
    for (Eigen::Index k = 0; k < g.size(); ++k)
      if (g[k] <= gmin + rel * (1.0 + std::abs(gmin))) sup.push_back(k);
    if (std::find(supports.begin(), supports.end(), sup) == supports.end())
      supports.push_back(std::move(sup));
  }
  const double current = dual.value(lambda);
  for (const auto& sup : supports) {
    auto candidate = support_solve(dual, sup);
    if (!candidate || dual.pg_norm(*candidate) > tol) continue;
    if (dual.value(*candidate) > current + 1e-14 * (1.0 + std::abs(current))) continue;
    lambda = std::move(*candidate);
    return true;
  }
  return false;
}

// Primal active-set method on the simplex in extended precision, started from
// a feasible lambda. Finite and exact up to rounding; takes over when the
// first-order iteration stalls on badly scaled models.
XVector active_set_refine(const XMatrix& Q, const XVector& c, XVector lambda, int max_steps) {
  using std::abs;
  const auto K = lambda.size();
  std::vector<char> free(static_cast<std::size_t>(K), 0);
  for (Eigen::Index k = 0; k < K; ++k) free[static_cast<std::size_t>(k)] = lambda[k] > 0.0L;
  for (int step = 0; step < max_steps; ++step) {
    std::vector<Eigen::Index> W;
    for (Eigen::Index k = 0; k < K; ++k)
      if (free[static_cast<std::size_t>(k)]) W.push_back(k);
    const auto w = static_cast<Eigen::Index>(W.size());
    const XVector g = Q * lambda - c;

    XVector p = XVector::Zero(w);
    bool full_step = true;
    if (w > 1) {
      // Orthonormal basis of the null space of the sum constraint on W.
      XMatrix basis = XMatrix::Identity(w, w);
      basis.col(0).setConstant(1.0L / std::sqrt(static_cast<long double>(w)));
      Eigen::HouseholderQR<XMatrix> qr(basis);
      const XMatrix Z = XMatrix(qr.householderQ()).rightCols(w - 1);
      XMatrix QW(w, w);
      XVector gW(w);
      for (Eigen::Index a = 0; a < w; ++a) {
        gW[a] = g[W[a]];
        for (Eigen::Index b = 0; b < w; ++b) QW(a, b) = Q(W[a], W[b]);
      }
      const XMatrix H = Z.transpose() * QW * Z;
      const XVector gz = Z.transpose() * gW;
      Eigen::SelfAdjointEigenSolver<XMatrix> eig(H);
      const XVector& ev = eig.eigenvalues();
      const XMatrix& V = eig.eigenvectors();
      const long double cut = 1e-15L * std::max(1.0L, ev.cwiseAbs().maxCoeff());
      XVector coef = V.transpose() * gz;
      bool unbounded = false;
      for (Eigen::Index a = 0; a < coef.size(); ++a) {
        if (ev[a] > cut) {
          coef[a] = -coef[a] / ev[a];
        } else if (abs(coef[a]) > 1e-17L) {
          unbounded = true;
        } else {
          coef[a] = 0.0L;
        }
      }
      if (unbounded) {
        // Flat directions with a slope: move along them to the boundary.
        for (Eigen::Index a = 0; a < coef.size(); ++a) coef[a] = ev[a] > cut ? 0.0L : -V.col(a).dot(gz);
        full_step = false;
      }
      p = Z * (V * coef);
    }

    if (p.norm() <= 1e-18L) {
      // Stationary on W: release the bound with the most negative multiplier.
      long double level = 0.0L;
      for (Eigen::Index a = 0; a < w; ++a) level += g[W[a]];
      level /= static_cast<long double>(w);
      Eigen::Index enter = -1;
      long double worst = -1e-16L * (1.0L + abs(level));
      for (Eigen::Index k = 0; k < K; ++k) {
        if (free[static_cast<std::size_t>(k)]) continue;
        if (g[k] - level < worst) {
          worst = g[k] - level;
          enter = k;
        }
      }
      if (enter < 0) return lambda;
      free[static_cast<std::size_t>(enter)] = 1;
      continue;
    }

    long double alpha = full_step ? 1.0L : std::numeric_limits<long double>::infinity();
    Eigen::Index block = -1;
    for (Eigen::Index a = 0; a < w; ++a) {
      if (p[a] < 0.0L) {
        const long double r = -lambda[W[a]] / p[a];
        if (r < alpha) {
          alpha = r;
          block = W[a];
        }
      }
    }
    if (!(alpha < std::numeric_limits<long double>::infinity())) return lambda;
    for (Eigen::Index a = 0; a < w; ++a) lambda[W[a]] = std::max(0.0L, lambda[W[a]] + alpha * p[a]);
    if (block >= 0) {
      lambda[block] = 0.0L;
      free[static_cast<std::size_t>(block)] = 0;
    }
    lambda /= lambda.sum();
  }
  return lambda;
}

Vector uniform_on_max(const Vector& offsets) {
  const double top = offsets.maxCoeff();
  Vector l = (offsets.array() == top).cast<double>().matrix();
  return l / l.sum();
}

// s = -G lambda and the duality gap, accumulated in extended precision. With
// large gradients that nearly cancel, double rounding in s alone can exceed
// the gap tolerance.
struct Extended {
  Vector lambda;
  Vector s;
  long double primal = 0.0L;
  long double gap = 0.0L;
};

Extended evaluate_extended(const LinearizedModel& model, const XVector& l) {
  const XMatrix G = model.gradients.cast<long double>();
  const XVector c = model.offsets.cast<long double>();
  const XVector s = -(G * l);
  const long double sq = s.squaredNorm();
  const long double primal = (c + G.transpose() * s).maxCoeff() + 0.5L * sq;
  const long double dual_value = c.dot(l) - 0.5L * sq;
  return {l.cast<double>(), s.cast<double>(), primal, primal - dual_value};
}

// Exact dual minimiser on a support, solved in extended precision.
std::optional<XVector> support_solve_extended(const LinearizedModel& model, double scale,
                                              const std::vector<Eigen::Index>& support) {
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s == 0) return std::nullopt;
  const long double sc = scale;
  XMatrix Gs(model.dim(), s);
  for (Eigen::Index a = 0; a < s; ++a) Gs.col(a) = model.gradients.col(support[a]).cast<long double>() / sc;
  XMatrix kkt = XMatrix::Zero(s + 1, s + 1);
  kkt.topLeftCorner(s, s) = Gs.transpose() * Gs;
  XVector rhs(s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    kkt(a, s) = 1.0L;
    kkt(s, a) = 1.0L;
    rhs[a] = static_cast<long double>(model.offsets[support[a]]) / (sc * sc);
  }
  rhs[s] = 1.0L;
  const XVector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  XVector l = XVector::Zero(model.pieces());
  for (Eigen::Index a = 0; a < s; ++a) {
    if (!std::isfinite(static_cast<double>(sol[a])) || sol[a] < -1e-15L) return std::nullopt;
    l[support[a]] = std::max(0.0L, sol[a]);
  }
  const long double total = l.sum();
  if (!(total > 0.0L)) return std::nullopt;
  return XVector(l / total);
}

// Candidate supports read off an approximate solution: entries above a few
// thresholds, and the pieces with the smallest dual gradient.
std::vector<std::vector<Eigen::Index>> candidate_supports(const ScaledDual& dual, const Vector& lambda) {
  std::vector<std::vector<Eigen::Index>> out;
  const auto add = [&](std::vector<Eigen::Index> sup) {
    if (!sup.empty() && std::find(out.begin(), out.end(), sup) == out.end()) out.push_back(std::move(sup));
  };
  const double top = lambda.maxCoeff();
  for (const double rel : {0.0, 1e-12, 1e-9, 1e-6, 1e-3}) {
    std::vector<Eigen::Index> sup;
    for (Eigen::Index k = 0; k < lambda.size(); ++k)
      if (lambda[k] > rel * top) sup.push_back(k);
    add(std::move(sup));
  }
  const Vector g = dual.grad(lambda);
  const double gmin = g.minCoeff();
  for (const double rel : {1e-12, 1e-9, 1e-6, 1e-3}) {
    std::vector<Eigen::Index> sup;
    for (Eigen::Index k = 0; k < g.size(); ++k)
      if (g[k] <= gmin + rel * (1.0 + std::abs(gmin))) sup.push_back(k);
    add(std::move(sup));
  }
  return out;
}

DirectionSolution finish(const LinearizedModel& model, Vector lambda, Vector s, int iterations) {
  DirectionSolution out;
  out.lambda = std::move(lambda);
  out.s = std::move(s);
  out.h_at_s = model_value(model, out.s);
  out.T = out.h_at_s + 0.5 * out.s.squaredNorm();
  // v = 0 is feasible with value max(c); never report something worse.
  const double at_zero = model.offsets.maxCoeff();
  if (out.T > at_zero) {
    out.s = Vector::Zero(model.dim());
    out.h_at_s = at_zero;
    out.T = at_zero;
  }
  out.iterations = iterations;
  out.kkt = verify_kkt(model, out);
  return out;
}

}  // namespace

DirectionSolution solve_direction(const LinearizedModel& model, const DualSolverOptions& options) {
  const auto k = model.offsets.size();
  if (k == 0) throw std::invalid_argument("direction subproblem needs at least one piece");
  if (model.gradients.cols() != k) throw std::invalid_argument("model gradient/offset count mismatch");
  if (!model.offsets.allFinite() || !model.gradients.allFinite())
    throw SubproblemError("non-finite model data", {}, std::numeric_limits<double>::infinity());

  const double scale = model.gradients.cwiseAbs().maxCoeff();
  if (scale == 0.0) return finish(model, uniform_on_max(model.offsets), Vector::Zero(model.dim()), 0);

  ScaledDual dual;
  const Matrix Gs = model.gradients / scale;
  dual.Q = Gs.transpose() * Gs;
  dual.c = model.offsets / (scale * scale);
  dual.L = lipschitz_estimate(dual.Q, options.power_iterations);

  const auto tolerance = [&](long double primal) {
    return static_cast<long double>(options.gap_tolerance) * (1.0L + std::abs(primal));
  };
  const auto gap_ok = [&](const Extended& e) { return e.gap <= tolerance(e.primal); };
  const auto done = [&](const Vector& l) {
    return dual.pg_norm(l) <= options.pg_tolerance &&
           gap_ok(evaluate_extended(model, l.cast<long double>()));
  };
  std::optional<Extended> found;
  const auto try_active_set = [&](const Vector& from) {
    const XMatrix Gx = model.gradients.cast<long double>() / static_cast<long double>(scale);
    const XVector cx = model.offsets.cast<long double>() / (static_cast<long double>(scale) * scale);
    const XVector l = active_set_refine(Gx.transpose() * Gx, cx, from.cast<long double>(),
                                        50 * static_cast<int>(k) + 50);
    return evaluate_extended(model, l);
  };

  Vector lambda = uniform_on_max(model.offsets);
  Vector y = lambda;
  double t = 1.0;
  int it = 0;
  bool converged = done(lambda);
  while (!converged && it < options.max_iterations) {
    ++it;
    const Vector gy = dual.grad(y);
    Vector next = project_simplex(y - gy / dual.L);
    if (gy.dot(next - lambda) > 0.0) {
      // Adaptive restart: momentum points uphill.
      t = 1.0;
      y = next;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = next + ((t - 1.0) / tn) * (next - lambda);
      t = tn;
    }
    lambda = std::move(next);
    converged = done(lambda);
    if (!converged && it == options.active_set_after) {
      Extended e = try_active_set(lambda);
      if (gap_ok(e)) {
        found = std::move(e);
        break;
      }
    }
    if (!converged && it % 20 == 0) {
      Vector trial = lambda;
      if (polish(dual, trial, options.pg_tolerance) && done(trial)) {
        lambda = std::move(trial);
        converged = true;
      }
    }
  }

  Extended best = found ? std::move(*found) : evaluate_extended(model, lambda.cast<long double>());
  if (!gap_ok(best)) {
    Vector trial = lambda;
    if (polish(dual, trial, options.pg_tolerance)) {
      Extended e = evaluate_extended(model, trial.cast<long double>());
      if (e.gap < best.gap) best = std::move(e);
    }
  }
  if (!gap_ok(best)) {
    Extended e = try_active_set(lambda);
    if (e.gap < best.gap) best = std::move(e);
  }
  if (!gap_ok(best)) {
    for (const auto& sup : candidate_supports(dual, best.lambda)) {
      const auto l = support_solve_extended(model, scale, sup);
      if (!l) continue;
      Extended e = evaluate_extended(model, *l);
      if (e.gap < best.gap) best = std::move(e);
      if (gap_ok(best)) break;
    }
  }

  DirectionSolution out = finish(model, std::move(best.lambda), std::move(best.s), it);
  if (!std::isfinite(out.T) || !out.s.allFinite())
    throw SubproblemError("direction subproblem overflowed", out.kkt,
                          std::numeric_limits<double>::infinity());
  if (!gap_ok(best))
    throw SubproblemError("dual iteration did not reach the duality-gap tolerance", out.kkt,
                          static_cast<double>(best.gap));
  return out;
}

}  // namespace rncg
