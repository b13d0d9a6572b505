#pragma once

// Nonlinear conjugate gradient driver for the worst-case robust counterpart.
//
// Each iteration solves the direction subproblem at x^k, blends s(x^k) with
// the previous direction through a gamma rule, safeguards the blend so that
// h(x^k, v^k) <= b h(x^k, s(x^k)) holds for the rule's b, and takes an
// Armijo-type step alpha = 2^-r satisfying
//
//   F_j(x + alpha v) <= F_j(x) + alpha beta h(x, v)   for every j.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rncg/problem.hpp"
#include "rncg/subproblem.hpp"

namespace rncg {

enum class GammaRule { FR, CD, DY, PRP, HS, Zero };

std::string_view to_string(GammaRule rule);
GammaRule parse_gamma_rule(std::string_view name);  // fr|cd|dy|prp|hs|zero

struct SolverConfig {
  double epsilon = 1e-4;
  int max_iters = 5000;
  double armijo_beta = 0.1;
  int max_backtracks = 40;
  GammaRule gamma_rule = GammaRule::FR;
  double mu = 0.5;
  double nu = 0.5;
  double tau_act = kDefaultActiveTol;
  double eps_crit = kDefaultCriticalTol;
  bool record_trace = true;

  /// Throws std::invalid_argument when a parameter is outside its range.
  void validate() const;
};

/// The b in h(x, v) <= b h(x, s(x)) guaranteed for `rule`.
double sufficient_descent_factor(GammaRule rule, double mu);

struct IterateRecord {
  int k = 0;
  Vector x;
  Vector F;
  double s_norm = 0.0;
  double T = 0.0;
  double h_at_s = 0.0;
  double h_at_v = 0.0;  // NaN on the terminal record
  double gamma = 0.0;
  double alpha = 0.0;   // 0 on the terminal record
  Vector v;
  int backtracks = 0;
  std::int64_t fun_evals_so_far = 0;
};

enum class RunStatus { Critical, MaxIters, LineSearchStall, SubproblemFailure };

std::string_view to_string(RunStatus status);

struct EvaluationCounts {
  std::int64_t fun = 0;
  std::int64_t grad = 0;
  std::int64_t iters = 0;
};

struct RunResult {
  RunStatus status = RunStatus::SubproblemFailure;
  Vector final_x;
  Vector final_F;
  int iterations = 0;
  std::vector<IterateRecord> trace;
  CriticalityCertificate certificate;
  EvaluationCounts evaluation_counts;
  std::string message;  // failure detail, empty otherwise
};

struct ArmijoStep {
  double alpha = 0.0;
  Vector x;
  RobustValue robust;
  int backtracks = 0;
};

/// Largest alpha = 2^-r (0 <= r <= max_backtracks) passing the decrease test
/// with strict decrease of every objective. Trial points with non-finite
/// objective values are rejected. Throws LineSearchStall if none passes.
ArmijoStep armijo_search(const UncertainProblem& problem, const Vector& x, const Vector& F,
                         const Vector& v, double h_xv, double beta, int max_backtracks,
                         double tau_act = kDefaultActiveTol, EvalCounter* counter = nullptr);

double gamma_fr(double h_s_k, double h_v_prev, double mu);
double gamma_cd(double h_s_k, double h_v_prev, double mu);
double gamma_dy(double h_s_k, double h_v_prev_at_new, double h_v_prev_at_old, double mu);
double gamma_prp(double h_s_k, double h_s_k_at_prev, double h_v_prev_at_old);
double gamma_hs(double h_s_k, double h_s_k_at_prev, double h_v_prev_at_new,
                double h_v_prev_at_old);

struct AssembledDirection {
  Vector v;
  double h_at_v = 0.0;
  double gamma = 0.0;  // after safeguarding
};

/// v = s + gamma v_prev, pulled back towards s whenever the blend misses
/// h(x, v) <= b h(x, s): first by the cap gamma <= -nu h(x,s) / h(x,v_prev)
/// (when h(x,v_prev) > 0), then by falling back to gamma = 0.
AssembledDirection assemble_direction(const Vector& s_k, const std::optional<Vector>& v_prev,
                                      double gamma, const LinearizedModel& model, double b,
                                      double nu);

RunResult solve(const UncertainProblem& problem, const Vector& x0, const SolverConfig& config);

}  // namespace rncg
