#include "rncg/pipeline.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rncg/errors.hpp"
#include "rncg/report.hpp"
#include "rncg/suite.hpp"

namespace rncg {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(number_or_null(v[k]));
  return a;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

RunSummary summarise(const UncertainProblem& problem, const RunOutcome& outcome,
                     std::string source, const SolverConfig& config) {
  RunSummary s;
  s.source = std::move(source);
  if (!outcome.result) {
    s.status = "error";
    s.x = Vector::Constant(problem.n, std::numeric_limits<double>::quiet_NaN());
    s.F = Vector::Constant(problem.m, std::numeric_limits<double>::quiet_NaN());
    s.certificate_norm = kInf;
    return s;
  }
  const RunResult& r = *outcome.result;
  s.status = std::string(to_string(r.status));
  s.x = r.final_x;
  s.F = r.final_F;
  s.iterations = r.evaluation_counts.iters;
  s.fun = r.evaluation_counts.fun;
  s.grad = r.evaluation_counts.grad;
  try {
    const auto cert = criticality_certificate(problem, r.final_x, config.tau_act, config.eps_crit);
    s.certified = cert.is_critical;
    s.certificate_norm = cert.min_norm;
  } catch (const std::exception&) {
    s.certified = false;
    s.certificate_norm = kInf;
  }
  return s;
}

MethodFront collect(const UncertainProblem& problem, std::string solver_id,
                    const std::vector<RunOutcome>& outcomes, const char* prefix,
                    const SolverConfig& config) {
  MethodFront f;
  f.solver_id = std::move(solver_id);
  f.archive.problem_id = problem.name;
  f.archive.solver_id = f.solver_id;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    RunSummary s = summarise(problem, outcomes[k], prefix + std::to_string(k), config);
    if (!outcomes[k].result) ++f.failed;
    f.iterations += s.iterations;
    f.fun += s.fun;
    f.grad += s.grad;
    if (s.certified && s.F.allFinite()) f.archive.points.push_back({s.x, s.F, s.source, s.certificate_norm});
    f.runs.push_back(std::move(s));
  }
  f.archive.filter();
  return f;
}

}  // namespace

void Manifest::validate() const {
  if (problems.empty()) throw std::invalid_argument("no problem selected");
  for (const auto& id : problems)
    if (!suite::has_problem(id)) throw std::invalid_argument("unknown problem id: " + id);
  if (starts < 1) throw std::invalid_argument("starts must be at least 1");
  ncg.validate();
  weighted.validate();
}

std::string ncg_solver_id(const SolverConfig& config) {
  return "ncg-" + std::string(to_string(config.gamma_rule));
}

MethodFront run_ncg_front(const UncertainProblem& problem, const Manifest& manifest) {
  SolverConfig config = manifest.ncg;
  config.record_trace = false;
  const auto starts = sample_starts(problem, manifest.starts, manifest.seed);
  const auto outcomes = run_multistart(problem, starts, config, manifest.exec);
  return collect(problem, ncg_solver_id(config), outcomes, "start-", config);
}

MethodFront run_weighted_front(const UncertainProblem& problem, const Manifest& manifest) {
  SolverConfig config = manifest.weighted;
  config.record_trace = false;
  const auto schedule = generate_weights(problem.m, std::max(manifest.starts, problem.m), manifest.seed);
  const auto outcomes = run_weight_schedule(problem, schedule, std::nullopt, config, manifest.exec);
  return collect(problem, kWeightedSolverId, outcomes, "weight-", manifest.ncg);
}

void compute_metrics(Comparison& c) {
  std::vector<std::vector<Vector>> fronts;
  for (const auto& m : c.methods) fronts.push_back(m.archive.objective_vectors());
  c.metrics.assign(c.methods.size(), {});
  bool any = false;
  for (const auto& f : fronts) any = any || !f.empty();
  if (any) {
    c.extremes = union_extremes(fronts);
    c.reference = reference_point(*c.extremes);
  }
  for (std::size_t k = 0; k < c.methods.size(); ++k) {
    MethodMetrics& mm = c.metrics[k];
    mm.iterations = c.methods[k].iterations;
    mm.function_evaluations = c.methods[k].function_evaluations(c.n);
    mm.front_size = fronts[k].size();
    if (fronts[k].empty()) continue;
    try {
      mm.delta_spread = delta_spread(fronts[k], *c.extremes);
    } catch (const UndefinedMetric&) {
    }
    if (c.m == 2 || c.m == 3) {
      const auto hv = hypervolume(fronts[k], *c.reference);
      mm.hypervolume = hv.value;
      mm.hv_excluded = hv.excluded;
    }
  }
}

Comparison run_compare(const std::string& problem_id, const Manifest& manifest) {
  const UncertainProblem problem = suite::build(problem_id);
  Comparison c;
  c.problem_id = problem_id;
  c.n = problem.n;
  c.m = problem.m;
  c.methods.push_back(run_ncg_front(problem, manifest));
  c.methods.push_back(run_weighted_front(problem, manifest));
  compute_metrics(c);
  return c;
}

ProfileKinds build_profiles(const std::vector<Comparison>& comparisons) {
  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  if (!comparisons.empty())
    for (const auto& m : comparisons.front().methods) solvers.push_back(m.solver_id);
  const auto P = static_cast<Eigen::Index>(comparisons.size());
  const auto S = static_cast<Eigen::Index>(solvers.size());
  Matrix it(P, S), fe(P, S), sp(P, S), hv(P, S);
  for (Eigen::Index p = 0; p < P; ++p) {
    const Comparison& c = comparisons[static_cast<std::size_t>(p)];
    problems.push_back(c.problem_id);
    if (static_cast<Eigen::Index>(c.metrics.size()) != S)
      throw std::invalid_argument("comparison " + c.problem_id + " has a different solver set");
    for (Eigen::Index s = 0; s < S; ++s) {
      const MethodMetrics& mm = c.metrics[static_cast<std::size_t>(s)];
      const bool produced = mm.front_size > 0;
      it(p, s) = produced ? std::max<double>(1.0, static_cast<double>(mm.iterations)) : kInf;
      fe(p, s) = produced ? static_cast<double>(mm.function_evaluations) : kInf;
      sp(p, s) = mm.delta_spread ? std::max(*mm.delta_spread, kSpreadFloor) : kInf;
      hv(p, s) = mm.hypervolume && *mm.hypervolume > 0.0 ? 1.0 / *mm.hypervolume : kInf;
    }
  }
  return {performance_profile(it, solvers, problems), performance_profile(fe, solvers, problems),
          performance_profile(sp, solvers, problems), performance_profile(hv, solvers, problems)};
}

std::string front_csv(const MethodFront& front, int n, int m) {
  std::ostringstream os;
  os << "source";
  for (int k = 1; k <= n; ++k) os << ",x" << k;
  for (int j = 1; j <= m; ++j) os << ",F" << j;
  os << ",is_critical,certificate_norm\n";
  for (const auto& p : front.archive.points) {
    os << p.source;
    for (Eigen::Index k = 0; k < p.x.size(); ++k) os << ',' << report::num(p.x[k]);
    for (Eigen::Index j = 0; j < p.F.size(); ++j) os << ',' << report::num(p.F[j]);
    os << ",true," << report::num(p.certificate_norm) << '\n';
  }
  return os.str();
}

std::string runs_csv(const MethodFront& front, int m) {
  std::ostringstream os;
  os << "source,status,iterations,fun,grad,certified,certificate_norm";
  for (int j = 1; j <= m; ++j) os << ",F" << j;
  os << '\n';
  for (const auto& r : front.runs) {
    os << r.source << ',' << r.status << ',' << r.iterations << ',' << r.fun << ',' << r.grad << ','
       << (r.certified ? "true" : "false") << ',' << report::num(r.certificate_norm);
    for (Eigen::Index j = 0; j < r.F.size(); ++j) os << ',' << report::num(r.F[j]);
    os << '\n';
  }
  return os.str();
}

std::string comparison_json(const Comparison& c) {
  Json j;
  j["schema"] = "v1";
  j["problem"] = c.problem_id;
  j["n"] = c.n;
  j["m"] = c.m;
  if (c.extremes) {
    j["extremes"] = {{"best", vector_json(c.extremes->best)}, {"worst", vector_json(c.extremes->worst)}};
    j["reference"] = vector_json(*c.reference);
  } else {
    j["extremes"] = nullptr;
    j["reference"] = nullptr;
  }
  Json methods = Json::array();
  for (std::size_t k = 0; k < c.methods.size(); ++k) {
    const MethodFront& f = c.methods[k];
    const MethodMetrics& mm = c.metrics[k];
    Json e;
    e["solver"] = f.solver_id;
    e["runs"] = f.runs.size();
    e["failed_runs"] = f.failed;
    e["front_size"] = mm.front_size;
    e["delta_spread"] = mm.delta_spread ? number_or_null(*mm.delta_spread) : Json(nullptr);
    e["hypervolume"] = mm.hypervolume ? number_or_null(*mm.hypervolume) : Json(nullptr);
    e["hypervolume_excluded"] = mm.hv_excluded;
    e["iterations"] = mm.iterations;
    e["function_evaluations"] = mm.function_evaluations;
    e["raw_function_calls"] = f.fun;
    e["gradient_calls"] = f.grad;
    Json front = Json::array();
    for (const auto& p : f.archive.points)
      front.push_back({{"source", p.source}, {"x", vector_json(p.x)}, {"F", vector_json(p.F)}});
    e["front"] = std::move(front);
    methods.push_back(std::move(e));
  }
  j["methods"] = std::move(methods);
  return j.dump(2) + "\n";
}

namespace {

const std::pair<const char*, const ProfileTable ProfileKinds::*> kKinds[] = {
    {"iterations", &ProfileKinds::iterations},
    {"function_evaluations", &ProfileKinds::function_evaluations},
    {"delta_spread", &ProfileKinds::delta_spread},
    {"inverse_hypervolume", &ProfileKinds::inverse_hypervolume},
};

}  // namespace

std::string profile_csv(const ProfileKinds& kinds) {
  std::ostringstream os;
  os << "kind,solver,tau,rho\n";
  for (const auto& [name, member] : kKinds) {
    const ProfileTable& t = kinds.*member;
    for (std::size_t s = 0; s < t.solvers.size(); ++s)
      for (std::size_t k = 0; k < t.tau.size(); ++k)
        os << name << ',' << t.solvers[s] << ',' << report::num(t.tau[k]) << ','
           << report::num(t.rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s))) << '\n';
  }
  return os.str();
}

std::string profile_json(const ProfileKinds& kinds, const std::vector<std::string>& skipped) {
  Json j;
  j["schema"] = "v1";
  j["problems"] = kinds.iterations.problems;
  j["solvers"] = kinds.iterations.solvers;
  Json ks;
  for (const auto& [name, member] : kKinds) {
    const ProfileTable& t = kinds.*member;
    ks[name] = {{"costs", matrix_json(t.costs)}, {"ratios", matrix_json(t.ratios)}};
  }
  j["kinds"] = std::move(ks);
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

std::string front_svg(const std::string& title, const std::vector<const MethodFront*>& fronts, int m) {
  std::vector<std::pair<int, int>> axes;
  if (m == 2) axes = {{0, 1}};
  else if (m >= 3) axes = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<report::SvgPanel> panels;
  for (const auto& [a, b] : axes) {
    report::SvgPanel p;
    p.title = "F" + std::to_string(a + 1) + " vs F" + std::to_string(b + 1);
    p.xlabel = "F" + std::to_string(a + 1);
    p.ylabel = "F" + std::to_string(b + 1);
    for (const MethodFront* f : fronts) {
      report::SvgSeries s;
      s.label = f->solver_id;
      for (const auto& pt : f->archive.points) s.points.emplace_back(pt.F[a], pt.F[b]);
      p.series.push_back(std::move(s));
    }
    panels.push_back(std::move(p));
  }
  return report::render_svg(title, panels);
}

std::string profile_svg(const std::string& title, const ProfileTable& table) {
  report::SvgPanel p;
  p.title = title;
  p.xlabel = "tau";
  p.ylabel = "rho(tau)";
  p.log_x = true;
  for (std::size_t s = 0; s < table.solvers.size(); ++s) {
    report::SvgSeries series;
    series.label = table.solvers[s];
    series.step = true;
    for (std::size_t k = 0; k < table.tau.size(); ++k)
      series.points.emplace_back(table.tau[k], table.rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)));
    if (table.tau.size() == 1) series.points.emplace_back(table.tau[0] * 1.0001, series.points.back().second);
    p.series.push_back(std::move(series));
  }
  return report::render_svg(title, {p});
}

}  // namespace rncg
