#include "rncg/cg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rncg/errors.hpp"

namespace rncg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool degenerate(double numerator, double denominator) {
  return std::abs(denominator) <= 1e-12 * (1.0 + std::abs(numerator));
}

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in [0, 1)");
}

}  // namespace

std::string_view to_string(GammaRule rule) {
  switch (rule) {
    case GammaRule::FR: return "fr";
    case GammaRule::CD: return "cd";
    case GammaRule::DY: return "dy";
    case GammaRule::PRP: return "prp";
    case GammaRule::HS: return "hs";
    case GammaRule::Zero: return "zero";
  }
  return "?";
}

GammaRule parse_gamma_rule(std::string_view name) {
  for (GammaRule r : {GammaRule::FR, GammaRule::CD, GammaRule::DY, GammaRule::PRP, GammaRule::HS,
                      GammaRule::Zero})
    if (to_string(r) == name) return r;
  throw std::invalid_argument("unknown gamma rule: " + std::string(name));
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Critical: return "critical";
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::LineSearchStall: return "line_search_stall";
    case RunStatus::SubproblemFailure: return "subproblem_failure";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (!(armijo_beta > 0.0 && armijo_beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (max_backtracks < 0) throw std::invalid_argument("max_backtracks must be nonnegative");
  check_mu(mu);
  if (!(nu >= 0.0 && nu < 1.0)) throw std::invalid_argument("nu must lie in [0, 1)");
  if (!(tau_act >= 0.0)) throw std::invalid_argument("tau_act must be nonnegative");
  if (!(eps_crit > 0.0)) throw std::invalid_argument("eps_crit must be positive");
}

double sufficient_descent_factor(GammaRule rule, double mu) {
  switch (rule) {
    case GammaRule::CD: return 1.0 - mu;
    case GammaRule::DY: return 1.0 / (1.0 + mu);
    default: return 1.0;
  }
}

ArmijoStep armijo_search(const UncertainProblem& problem, const Vector& x, const Vector& F,
                         const Vector& v, double h_xv, double beta, int max_backtracks,
                         double tau_act, EvalCounter* counter) {
  if (!(h_xv < 0.0)) throw std::invalid_argument("line search requires h(x, v) < 0");
  double alpha = 1.0;
  for (int r = 0; r <= max_backtracks; ++r, alpha *= 0.5) {
    Vector trial = x + alpha * v;
    if (!trial.allFinite()) continue;
    RobustValue rv;
    try {
      rv = robust_value(problem, trial, tau_act, counter);
    } catch (const EvaluationError&) {
      continue;
    }
    const double decrease = alpha * beta * h_xv;
    bool ok = true;
    for (int j = 0; j < problem.m && ok; ++j)
      ok = rv.robust[j] <= F[j] + decrease && rv.robust[j] < F[j];
    if (ok) return {alpha, std::move(trial), std::move(rv), r};
  }
  throw LineSearchStall("no step size passed the Armijo test");
}

double gamma_fr(double h_s_k, double h_v_prev, double mu) {
  check_mu(mu);
  if (h_v_prev == 0.0) throw DegenerateDenominator("FR rule: h(x^{k-1}, v^{k-1}) is zero");
  if (h_v_prev > 0.0) throw std::invalid_argument("FR rule: previous direction was not descent");
  if (degenerate(h_s_k, h_v_prev)) return 0.0;
  return mu * (h_s_k / h_v_prev);
}

double gamma_cd(double h_s_k, double h_v_prev, double mu) {
  check_mu(mu);
  if (h_v_prev == 0.0) throw DegenerateDenominator("CD rule: h(x^{k-1}, v^{k-1}) is zero");
  if (h_v_prev > 0.0) throw std::invalid_argument("CD rule: previous direction was not descent");
  if (degenerate(h_s_k, h_v_prev)) return 0.0;
  const double cap = h_s_k / h_v_prev;
  return std::clamp(mu * cap, 0.0, std::max(cap, 0.0));
}

double gamma_dy(double h_s_k, double h_v_prev_at_new, double h_v_prev_at_old, double mu) {
  check_mu(mu);
  if (!(h_v_prev_at_old < 0.0)) throw std::invalid_argument("DY rule: previous direction was not descent");
  const double denominator = h_v_prev_at_new - h_v_prev_at_old;
  if (denominator <= 0.0 || degenerate(h_s_k, denominator)) return 0.0;
  return std::max(0.0, mu * (-h_s_k / denominator));
}

double gamma_prp(double h_s_k, double h_s_k_at_prev, double h_v_prev_at_old) {
  if (!(h_v_prev_at_old < 0.0)) throw std::invalid_argument("PRP rule: previous direction was not descent");
  const double numerator = -h_s_k + h_s_k_at_prev;
  const double denominator = -h_v_prev_at_old;
  if (degenerate(numerator, denominator)) return 0.0;
  return std::max(numerator / denominator, 0.0);
}

double gamma_hs(double h_s_k, double h_s_k_at_prev, double h_v_prev_at_new,
                double h_v_prev_at_old) {
  if (!(h_v_prev_at_old < 0.0)) throw std::invalid_argument("HS rule: previous direction was not descent");
  const double numerator = -h_s_k + h_s_k_at_prev;
  const double denominator = h_v_prev_at_new - h_v_prev_at_old;
  if (degenerate(numerator, denominator)) return 0.0;
  return std::max(numerator / denominator, 0.0);
}

AssembledDirection assemble_direction(const Vector& s_k, const std::optional<Vector>& v_prev,
                                      double gamma, const LinearizedModel& model, double b,
                                      double nu) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and >= 0");
  const double h_s = model_value(model, s_k);
  AssembledDirection steepest{s_k, h_s, 0.0};
  if (!v_prev || gamma == 0.0) return steepest;

  Vector v = s_k + gamma * *v_prev;
  double h_v = model_value(model, v);
  if (h_v <= b * h_s) return {std::move(v), h_v, gamma};

  const double h_prev = model_value(model, *v_prev);
  if (h_prev > 0.0) {
    const double capped = std::min(gamma, -nu * h_s / h_prev);
    if (capped > 0.0) {
      v = s_k + capped * *v_prev;
      h_v = model_value(model, v);
      if (h_v <= b * h_s) return {std::move(v), h_v, capped};
    }
  }
  return steepest;
}

namespace {

double rule_gamma(const SolverConfig& config, const DirectionSolution& dir,
                  const LinearizedModel& model, const LinearizedModel& prev_model,
                  const Vector& v_prev, double h_v_prev_old) {
  const double h_s = dir.h_at_s;
  try {
    switch (config.gamma_rule) {
      case GammaRule::Zero: return 0.0;
      case GammaRule::FR: return gamma_fr(h_s, h_v_prev_old, config.mu);
      case GammaRule::CD: return gamma_cd(h_s, h_v_prev_old, config.mu);
      case GammaRule::DY:
        return gamma_dy(h_s, model_value(model, v_prev), h_v_prev_old, config.mu);
      case GammaRule::PRP:
        return gamma_prp(h_s, model_value(prev_model, dir.s), h_v_prev_old);
      case GammaRule::HS:
        return gamma_hs(h_s, model_value(prev_model, dir.s), model_value(model, v_prev),
                        h_v_prev_old);
    }
  } catch (const DegenerateDenominator&) {
  }
  return 0.0;
}

CriticalityCertificate failed_certificate() {
  CriticalityCertificate c;
  c.min_norm = std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace

RunResult solve(const UncertainProblem& problem, const Vector& x0, const SolverConfig& config) {
  config.validate();
  if (x0.size() != problem.n) throw std::invalid_argument("start point has the wrong dimension");
  if (!x0.allFinite()) throw std::invalid_argument("start point is not finite");

  RunResult result;
  EvalCounter counter;
  Vector x = x0;
  RobustValue rv;
  std::optional<CriticalityCertificate> cert_at_x;

  auto conclude = [&](RunStatus status, int steps) {
    result.status = status;
    result.final_x = x;
    result.final_F = rv.robust.size() ? rv.robust : Vector::Constant(problem.m, kNaN);
    result.iterations = steps;
    if (!cert_at_x) {
      try {
        cert_at_x = criticality_certificate(problem, x, config.tau_act, config.eps_crit, &counter);
      } catch (const std::exception&) {
        cert_at_x = failed_certificate();
      }
    }
    result.certificate = *cert_at_x;
    result.evaluation_counts = {counter.fun, counter.grad, steps};
    return result;
  };

  try {
    rv = robust_value(problem, x, config.tau_act, &counter);
  } catch (const EvaluationError& e) {
    result.message = e.what();
    cert_at_x = failed_certificate();
    return conclude(RunStatus::SubproblemFailure, 0);
  }

  const double b = sufficient_descent_factor(config.gamma_rule, config.mu);
  LinearizedModel prev_model;
  std::optional<Vector> v_prev;
  double h_v_prev_old = 0.0;

  for (int k = 0;; ++k) {
    LinearizedModel model;
    DirectionSolution dir;
    try {
      model = build_model(problem, x, rv, &counter);
      dir = solve_direction(model);
    } catch (const std::runtime_error& e) {
      result.message = e.what();
      return conclude(RunStatus::SubproblemFailure, k);
    }

    IterateRecord rec;
    rec.k = k;
    rec.F = rv.robust;
    rec.s_norm = dir.s.norm();
    rec.T = dir.T;
    rec.h_at_s = dir.h_at_s;
    rec.h_at_v = kNaN;
    auto push = [&](IterateRecord& r) {
      r.fun_evals_so_far = counter.fun;
      if (config.record_trace) {
        r.x = x;
        result.trace.push_back(std::move(r));
      }
    };

    if (std::abs(dir.T) < config.epsilon || rec.s_norm < config.epsilon) {
      try {
        cert_at_x = criticality_certificate(problem, x, config.tau_act, config.eps_crit, &counter);
      } catch (const std::runtime_error& e) {
        result.message = e.what();
        push(rec);
        return conclude(RunStatus::SubproblemFailure, k);
      }
      if (cert_at_x->is_critical) {
        push(rec);
        return conclude(RunStatus::Critical, k);
      }
    }
    if (k >= config.max_iters) {
      push(rec);
      return conclude(RunStatus::MaxIters, k);
    }

    const double gamma =
        v_prev ? rule_gamma(config, dir, model, prev_model, *v_prev, h_v_prev_old) : 0.0;
    AssembledDirection dirv = assemble_direction(dir.s, v_prev, gamma, model, b, config.nu);

    std::optional<ArmijoStep> step;
    if (dirv.h_at_v < 0.0) {
      try {
        step = armijo_search(problem, x, rv.robust, dirv.v, dirv.h_at_v, config.armijo_beta,
                             config.max_backtracks, config.tau_act, &counter);
      } catch (const LineSearchStall&) {
        if (dirv.gamma != 0.0 && dir.h_at_s < 0.0) {
          dirv = {dir.s, dir.h_at_s, 0.0};
          try {
            step = armijo_search(problem, x, rv.robust, dirv.v, dirv.h_at_v, config.armijo_beta,
                                 config.max_backtracks, config.tau_act, &counter);
          } catch (const LineSearchStall&) {
          }
        }
      }
    }
    if (!step) {
      result.message = dirv.h_at_v < 0.0 ? "no step size passed the Armijo test"
                                         : "model admits no descent direction";
      push(rec);
      return conclude(RunStatus::LineSearchStall, k);
    }

    rec.h_at_v = dirv.h_at_v;
    rec.gamma = dirv.gamma;
    rec.alpha = step->alpha;
    rec.backtracks = step->backtracks;
    if (config.record_trace) rec.v = dirv.v;
    push(rec);

    prev_model = std::move(model);
    v_prev = std::move(dirv.v);
    h_v_prev_old = dirv.h_at_v;
    x = std::move(step->x);
    rv = std::move(step->robust);
    cert_at_x.reset();
  }
}

}  // namespace rncg
