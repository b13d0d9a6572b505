// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rncg/cg.hpp"
#include "rncg/metrics.hpp"
#include "rncg/pipeline.hpp"
#include "rncg/rng.hpp"
#include "rncg/subproblem.hpp"
#include "rncg/suite.hpp"
#include "rncg/weighted_sum.hpp"

using namespace rncg;

namespace {

int failures = 0;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const char* name, const Check& c, double secs, const std::string& info = "") {
  std::printf("[%s] %d %s (%.2fs)%s%s%s\n", c.ok ? "PASS" : "FAIL", id, name, secs,
              info.empty() ? "" : " ", info.c_str(), c.ok ? "" : (" :: " + c.detail).c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

std::vector<Vector> pts(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<Vector> out;
  for (auto r : rows) out.push_back(vec(r));
  return out;
}

void start_point() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const auto p = suite::build("tp1-ex");
  const auto rv = robust_value(p, Vector::Constant(1, -0.6310622));
  const double e0 = std::abs(rv.robust[0] - 13.18461274);
  const double e1 = std::abs(rv.robust[1] - 1.49494711);
  c.require(e0 <= 1e-6 && e1 <= 1e-6, fmt("errors %.3g %.3g", e0, e1));
  report(1, "start-point robust values", c, seconds_since(t0),
         fmt("F=(%.10g, %.10g)", rv.robust[0], rv.robust[1]));
}

void convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const auto p = suite::build("tp1-ex");
  SolverConfig cfg;
  cfg.gamma_rule = GammaRule::FR;
  cfg.epsilon = 1e-4;
  const auto r = solve(p, Vector::Constant(1, -0.6310622), cfg);
  c.require(r.status == RunStatus::Critical, "status " + std::string(to_string(r.status)));
  c.require(r.iterations <= 50, "iterations " + std::to_string(r.iterations));
  c.require(r.certificate.min_norm <= 1e-4, fmt("final min_norm %.3g", r.certificate.min_norm));
  const auto star = criticality_certificate(p, Vector::Constant(1, 1.15531051), kDefaultActiveTol, 1e-6);
  c.require(star.min_norm <= 1e-6, fmt("reported optimum min_norm %.3g", star.min_norm));
  const double secs = seconds_since(t0);
  c.require(secs < 1.0, fmt("runtime %.3gs", secs));
  report(2, "tp1-ex convergence", c, secs,
         fmt("x*=%.9g iters=", r.final_x[0]) + std::to_string(r.iterations) +
             fmt(" min_norm(x*=1.15531051)=%.3g", star.min_norm));
}

void subproblem_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  SplitMix64 rng(20240601);
  double worst_s = 0.0, worst_T = 0.0, worst_kkt = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng.next() % 3);
    const int K = 1 + static_cast<int>(rng.next() % 4);
    LinearizedModel m;
    m.offsets.resize(K);
    m.gradients.resize(n, K);
    for (int k = 0; k < K; ++k) {
      m.offsets[k] = -5.0 * rng.uniform();
      for (int r = 0; r < n; ++r) m.gradients(r, k) = -5.0 + 10.0 * rng.uniform();
    }
    m.offsets[static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(K))] = 0.0;
    const auto d = solve_direction(m);
    const auto g = oracle::simplex_grid(m, 1000);
    const auto r = verify_kkt(m, d);
    worst_s = std::max(worst_s, std::abs(d.s.norm() - g.s.norm()));
    worst_T = std::max(worst_T, std::abs(d.T - g.T));
    worst_kkt = std::max({worst_kkt, r.simplex_gap, std::max(0.0, -r.min_lambda), r.stationarity_norm,
                          r.max_primal_violation, r.complementarity_gap});
  }
  c.require(worst_s <= 2e-3, fmt("|s| difference %.3g", worst_s));
  c.require(worst_T <= 1e-3, fmt("T difference %.3g", worst_T));
  c.require(worst_kkt <= 1e-8, fmt("KKT residual %.3g", worst_kkt));
  const double secs = seconds_since(t0);
  c.require(secs < 10.0, fmt("runtime %.3gs", secs));
  report(3, "subproblem vs simplex-grid oracle", c, secs,
         fmt("max d|s|=%.3g max dT=%.3g", worst_s, worst_T) + fmt(" max kkt=%.3g", worst_kkt));
}

void descent_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  long runs = 0, steps = 0, violations = 0, subproblem_failures = 0;
  for (const auto& spec : suite::list_problems()) {
    const auto p = suite::build(spec.id);
    for (GammaRule rule : {GammaRule::FR, GammaRule::CD, GammaRule::DY, GammaRule::PRP, GammaRule::HS,
                           GammaRule::Zero}) {
      SolverConfig cfg;
      cfg.gamma_rule = rule;
      const double b = sufficient_descent_factor(rule, cfg.mu);
      for (int s = 0; s < 10; ++s) {
        SplitMix64 rng = SplitMix64::stream(4, static_cast<std::uint64_t>(s));
        const auto r = solve(p, sample_box(rng, p.lower_bound, p.upper_bound), cfg);
        ++runs;
        const std::string where = spec.id + " " + std::string(to_string(rule)) + " start " + std::to_string(s);
        if (r.status == RunStatus::SubproblemFailure) ++subproblem_failures;
        for (std::size_t k = 0; k < r.trace.size(); ++k) {
          const auto& rec = r.trace[k];
          bool ok = rec.T <= 0.0;
          if (k + 1 < r.trace.size()) {
            ++steps;
            ok = ok && rec.h_at_v <= b * rec.h_at_s && (r.trace[k + 1].F.array() < rec.F.array()).all();
          }
          if (!ok) {
            ++violations;
            c.require(false, where + " iterate " + std::to_string(k));
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  c.require(secs < 300.0, fmt("runtime %.3gs", secs));
  report(4, "descent invariants over all rules and problems", c, secs,
         std::to_string(runs) + " runs, " + std::to_string(steps) + " steps, " +
             std::to_string(violations) + " violations, " + std::to_string(subproblem_failures) +
             " runs ended on an uncertifiable subproblem");
}

void steepest_reference() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::size_t compared = 0;
  for (const char* id : {"tp1-ex", "tp2"}) {
    const auto p = suite::build(id);
    for (int s = 0; s < 5; ++s) {
      SplitMix64 rng = SplitMix64::stream(5, static_cast<std::uint64_t>(s));
      const Vector x0 = sample_box(rng, p.lower_bound, p.upper_bound);
      SolverConfig cfg;
      cfg.gamma_rule = GammaRule::Zero;
      const auto r = solve(p, x0, cfg);
      const auto ref = oracle::steepest_descent(p, x0, cfg.armijo_beta, cfg.epsilon, cfg.max_iters,
                                                cfg.max_backtracks);
      const std::string where = std::string(id) + " start " + std::to_string(s);
      c.require(ref.size() == r.trace.size(), where + ": trace lengths differ");
      for (std::size_t k = 0; k < std::min(ref.size(), r.trace.size()); ++k, ++compared)
        c.require((ref[k].x - r.trace[k].x).lpNorm<Eigen::Infinity>() <= 1e-12,
                  where + " iterate " + std::to_string(k));
    }
  }
  report(5, "zero rule equals steepest-descent reference", c, seconds_since(t0),
         std::to_string(compared) + " iterates compared");
}

// Points where every scenario value and analytic gradient is finite; the
// exponential terms of some problems overflow on part of their box.
bool finite_at(const UncertainProblem& p, const Vector& x) {
  for (int j = 0; j < p.m; ++j)
    for (int i = 0; i < p.p; ++i)
      if (!std::isfinite(p.value_fn(x, j, i)) || !gradient(p, x, j, i).allFinite()) return false;
  return true;
}

void gradient_audit() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  double worst = 0.0;
  int skipped = 0;
  for (const auto& spec : suite::list_problems()) {
    const auto p = suite::build(spec.id);
    SplitMix64 rng = SplitMix64::stream(6, 0);
    int audited = 0;
    for (int draw = 0; audited < 20 && draw < 2000; ++draw) {
      const Vector x = sample_box(rng, p.lower_bound, p.upper_bound);
      if (!finite_at(p, x)) {
        ++skipped;
        continue;
      }
      ++audited;
      const double step = std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.lpNorm<Eigen::Infinity>());
      for (int j = 0; j < p.m; ++j)
        for (int i = 0; i < p.p; ++i) {
          const Vector g = gradient(p, x, j, i);
          const Vector fd = fd_gradient(p, x, j, i, step);
          const double rel = (g - fd).norm() / (1.0 + g.norm());
          worst = std::max(worst, std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel);
          c.require(rel <= 1e-4, spec.id + fmt(" relative error %.3g", rel));
        }
    }
    c.require(audited == 20, spec.id + ": too few finite points");
  }
  report(6, "analytic vs forward-difference gradients", c, seconds_since(t0),
         fmt("worst relative error %.3g, ", worst) + std::to_string(skipped) + " overflowing draws skipped");
}

void metric_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  c.require(hypervolume(pts({{1, 2}, {2, 1}}), vec({3, 3})).value == 3.0, "hypervolume");
  const auto uniform = pts({{0, 4}, {1, 3}, {2, 2}, {3, 1}, {4, 0}});
  c.require(delta_spread(uniform, union_extremes({uniform})) == 0.0, "uniform spread");
  c.require(std::abs(delta_spread(pts({{0}, {1}, {3}}), Extremes{vec({0}), vec({3})}) - 1.0 / 3.0) <= 1e-12,
            "1-D spread");
  // Costs: A = (1, 1, 4), B = (2, 2, 1). Ratios A = (1, 1, 4), B = (2, 2, 1).
  Matrix hand(3, 2);
  hand << 1, 2, 1, 2, 4, 1;
  const auto t = performance_profile(hand, {"A", "B"}, {"p1", "p2", "p3"});
  const std::vector<std::pair<double, std::pair<double, double>>> expect = {
      {1.0, {2.0 / 3.0, 1.0 / 3.0}}, {1.5, {2.0 / 3.0, 1.0 / 3.0}}, {2.0, {2.0 / 3.0, 1.0}},
      {3.0, {2.0 / 3.0, 1.0}},       {4.0, {1.0, 1.0}}};
  for (const auto& [tau, rho] : expect)
    c.require(t.rho_at(0, tau) == rho.first && t.rho_at(1, tau) == rho.second, fmt("profile at tau %g", tau));
  c.require(t.tau.front() == 1.0 && t.tau.back() == 4.0, "tau grid endpoints");
  report(7, "metric closed forms", c, seconds_since(t0));
}

void weighted_reformulation() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  double worst = 0.0;
  for (const auto& spec : suite::list_problems()) {
    const auto p = suite::build(spec.id);
    std::vector<WeightVector> ws;
    std::vector<Vector> xs;
    for (int s = 0; s < 100; ++s) {
      SplitMix64 rng = SplitMix64::stream(8, static_cast<std::uint64_t>(s));
      xs.push_back(sample_box(rng, p.lower_bound, p.upper_bound));
      Vector a(p.m);
      for (int j = 0; j < p.m; ++j) a[j] = rng.uniform();
      ws.push_back({a});
    }
    for (int s = 0; s < 100; ++s) {
      const auto expanded = tuple_expand(p, ws[static_cast<std::size_t>(s)]);
      const double lhs = ws[static_cast<std::size_t>(s)].a.dot(robust_value(p, xs[static_cast<std::size_t>(s)]).robust);
      const double rhs = robust_value(expanded, xs[static_cast<std::size_t>(s)]).robust[0];
      const double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
      worst = std::max(worst, rel);
      c.require(rel <= 1e-12, spec.id + fmt(" relative error %.3g", rel));
    }
  }
  const auto p = suite::build("tp1-ex");
  const auto r = solve_weighted(p, {vec({1, 0})});
  const double grid = oracle::grid_argmin(
      [&](double x) { return robust_value(p, Vector::Constant(1, x)).robust[0]; }, p.lower_bound[0],
      p.upper_bound[0], 1e-4);
  c.require(std::abs(r.final_x[0] - grid) <= 1e-3 && std::abs(grid - 1.0) <= 1e-3,
            fmt("weighted x %.6g vs grid %.6g", r.final_x[0], grid));
  report(8, "weighted-sum reformulation", c, seconds_since(t0),
         fmt("worst relative error %.3g, x=%.6g", worst, r.final_x[0]));
}

std::vector<std::string> compare_bytes(const Manifest& m, const std::string& id) {
  auto cmp = run_compare(id, m);
  std::vector<std::string> out;
  for (const auto& f : cmp.methods) {
    out.push_back(front_csv(f, cmp.n, cmp.m));
    out.push_back(runs_csv(f, cmp.m));
  }
  out.push_back(comparison_json(cmp));
  return out;
}

void determinism(bool full_profile) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  Manifest m;
  m.problems = {"tp1-ex", "tp4"};
  for (const auto& id : m.problems) {
    const auto a = compare_bytes(m, id);
    const auto b = compare_bytes(m, id);
    c.require(a == b, id + ": repeated compare differs");
  }
  std::string info;
  if (full_profile) {
    const auto tp = std::chrono::steady_clock::now();
    Manifest pm;
    pm.problems = suite::profile_suite_ids();
    pm.exec = Execution::Serial;
    std::vector<Comparison> comps;
    for (const auto& id : pm.problems) comps.push_back(run_compare(id, pm));
    const auto kinds = build_profiles(comps);
    const double secs = seconds_since(tp);
    c.require(!profile_csv(kinds).empty(), "empty profile output");
    c.require(secs < 1800.0, fmt("profile runtime %.4gs", secs));
    info = fmt("full profile on one core %.1fs", secs);
  } else {
    info = "full profile skipped (--quick)";
  }
  report(9, "pipeline determinism and profile runtime", c, seconds_since(t0), info);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::function<void()>> criteria = {
      start_point,     convergence,        subproblem_oracle,      descent_sweep,
      steepest_reference, gradient_audit, metric_closed_forms, weighted_reformulation,
      [&] { determinism(!quick); }};
  for (std::size_t i = 0; i < criteria.size(); ++i)
    if (only == 0 || only == static_cast<int>(i + 1)) criteria[i]();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
