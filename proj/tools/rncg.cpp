// rncg: command-line front end for the robust multiobjective CG solver.
//
//   rncg list
//   rncg solve   --problem tp1-ex --x0 -0.6310622 --rule fr
//   rncg front   --problem tp2 --starts 100 --seed 7 --out out/
//   rncg compare --problem tp1-ex,tp4 --out out/
//   rncg profile --out out/            (all twenty problems)
//
// Any subcommand accepts --manifest FILE with flat "key = value" lines using
// the long flag names; flags given on the command line win.

#include <cstdint>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rncg/cg.hpp"
#include "rncg/pipeline.hpp"
#include "rncg/report.hpp"
#include "rncg/suite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMaxIters = 2;
constexpr int kExitFailure = 3;
constexpr int kExitUsage = 64;
constexpr int kExitOutput = 74;

struct Options {
  std::vector<std::string> problems;
  std::string rule = "fr";
  double beta = 0.1;
  double mu = 0.5;
  double nu = 0.5;
  double eps = 1e-4;
  int max_iters = 5000;
  int starts = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> formats{"csv", "json", "svg"};
  std::vector<double> x0;
  bool center = false;
  bool serial = false;
  std::string manifest;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Turns manifest lines into argv tokens, skipping keys already on the command line.
std::vector<std::string> manifest_tokens(const std::string& path, const std::set<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read manifest " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (char& c : key)
      if (c == '_') c = '-';
    if (key == "manifest") throw UsageError("manifests cannot include other manifests");
    if (given.count(key)) continue;
    if (key == "center" || key == "serial") {
      if (value == "true" || value == "1") tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Reassembles argv with manifest entries inserted right after the subcommand.
std::vector<std::string> expand_manifest(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::set<std::string> given;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "manifest") path = eq == std::string::npos ? (k + 1 < args.size() ? args[k + 1] : "") : a.substr(eq + 1);
  }
  if (path.empty() || args.empty()) return args;
  auto tokens = manifest_tokens(path, given);
  args.insert(args.begin() + 1, tokens.begin(), tokens.end());
  return args;
}

rncg::SolverConfig solver_config(const Options& o) {
  rncg::SolverConfig c;
  try {
    c.gamma_rule = rncg::parse_gamma_rule(o.rule);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.armijo_beta = o.beta;
  c.mu = o.mu;
  c.nu = o.nu;
  c.epsilon = o.eps;
  c.max_iters = o.max_iters;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

rncg::Manifest build_manifest(const Options& o, std::vector<std::string> default_problems) {
  rncg::Manifest m;
  m.problems = o.problems.empty() ? std::move(default_problems) : o.problems;
  m.ncg = solver_config(o);
  m.weighted.armijo_beta = o.beta;
  m.weighted.epsilon = o.eps;
  m.weighted.max_iters = o.max_iters;
  m.starts = o.starts;
  m.seed = o.seed;
  m.out_dir = o.out.empty() ? "out" : o.out;
  m.emit_csv = m.emit_json = m.emit_svg = false;
  for (const auto& f : o.formats) {
    if (f == "csv") m.emit_csv = true;
    else if (f == "json") m.emit_json = true;
    else if (f == "svg") m.emit_svg = true;
    else throw UsageError("unknown format: " + f);
  }
  m.exec = o.serial ? rncg::Execution::Serial : rncg::Execution::Parallel;
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return m;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return dir.empty() || dir.back() == '/' ? dir + name : dir + "/" + name;
}

void add_solver_flags(CLI::App* sub, Options& o) {
  sub->add_option("--rule", o.rule, "gamma rule: fr|cd|dy|prp|hs|zero");
  sub->add_option("--beta", o.beta, "Armijo parameter in (0,1)");
  sub->add_option("--mu", o.mu, "rule scaling in [0,1)");
  sub->add_option("--nu", o.nu, "safeguard parameter in [0,1)");
  sub->add_option("--eps", o.eps, "stopping tolerance");
  sub->add_option("--max-iters", o.max_iters, "iteration cap");
  sub->add_option("--manifest", o.manifest, "flat key = value file of flag defaults");
}

void add_batch_flags(CLI::App* sub, Options& o) {
  add_solver_flags(sub, o);
  sub->add_option("--problem", o.problems, "problem ids")->delimiter(',');
  sub->add_option("--starts", o.starts, "start points / weights per method");
  sub->add_option("--seed", o.seed, "RNG seed");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--format", o.formats, "csv,json,svg")->delimiter(',');
  sub->add_flag("--serial", o.serial, "use the serial reference instead of the OpenMP kernel");
}

int cmd_list() {
  std::printf("%-8s %3s %3s %3s  %-28s %s\n", "id", "m", "n", "p", "bounds", "note");
  for (const auto& s : rncg::suite::list_problems()) {
    std::ostringstream b;
    b << '[' << rncg::report::num(s.lower_bound.minCoeff()) << ", " << rncg::report::num(s.upper_bound.maxCoeff())
      << ']';
    std::printf("%-8s %3d %3d %3d  %-28s %s\n", s.id.c_str(), s.m, s.n, s.p, b.str().c_str(), s.note.c_str());
  }
  return kExitOk;
}

int cmd_solve(const Options& o, const std::string& positional) {
  std::string id = positional;
  if (id.empty() && o.problems.size() == 1) id = o.problems.front();
  if (id.empty()) throw UsageError("solve needs exactly one problem");
  if (!rncg::suite::has_problem(id)) throw UsageError("unknown problem id: " + id);
  const rncg::UncertainProblem problem = rncg::suite::build(id);
  rncg::Vector x0;
  if (!o.x0.empty()) {
    if (o.center) throw UsageError("--x0 and --center are exclusive");
    if (static_cast<int>(o.x0.size()) != problem.n)
      throw UsageError("--x0 needs " + std::to_string(problem.n) + " components");
    x0 = Eigen::Map<const rncg::Vector>(o.x0.data(), problem.n);
  } else {
    x0 = problem.center();
  }
  const rncg::SolverConfig config = solver_config(o);
  const rncg::RunResult r = rncg::solve(problem, x0, config);

  std::printf("%5s", "k");
  for (int j = 1; j <= problem.m; ++j) std::printf(" %16s", ("F" + std::to_string(j)).c_str());
  std::printf(" %12s %13s %10s %10s %4s\n", "||s||", "T", "gamma", "alpha", "bt");
  for (const auto& rec : r.trace) {
    std::printf("%5d", rec.k);
    for (int j = 0; j < problem.m; ++j) std::printf(" %16.9g", rec.F[j]);
    std::printf(" %12.5e %13.6e %10.4g %10.4g %4d\n", rec.s_norm, rec.T, rec.gamma, rec.alpha, rec.backtracks);
  }
  std::printf("status: %s after %d steps\n", std::string(rncg::to_string(r.status)).c_str(), r.iterations);
  std::printf("x*:");
  for (int k = 0; k < problem.n; ++k) std::printf(" %.12g", r.final_x[k]);
  std::printf("\ncertificate: %s (min_norm %.3e, %zu active pairs)\n",
              r.certificate.is_critical ? "critical" : "not critical", r.certificate.min_norm,
              r.certificate.active_pairs.size());
  std::printf("evaluations: fun %lld grad %lld\n", static_cast<long long>(r.evaluation_counts.fun),
              static_cast<long long>(r.evaluation_counts.grad));
  if (!r.message.empty()) std::printf("message: %s\n", r.message.c_str());

  if (!o.out.empty()) {
    std::ostringstream os;
    os << "k";
    for (int k = 1; k <= problem.n; ++k) os << ",x" << k;
    for (int j = 1; j <= problem.m; ++j) os << ",F" << j;
    os << ",s_norm,T,h_s,h_v,gamma,alpha,backtracks\n";
    for (const auto& rec : r.trace) {
      os << rec.k;
      for (int k = 0; k < problem.n; ++k) os << ',' << rncg::report::num(rec.x[k]);
      for (int j = 0; j < problem.m; ++j) os << ',' << rncg::report::num(rec.F[j]);
      os << ',' << rncg::report::num(rec.s_norm) << ',' << rncg::report::num(rec.T) << ','
         << rncg::report::num(rec.h_at_s) << ',' << rncg::report::num(rec.h_at_v) << ','
         << rncg::report::num(rec.gamma) << ',' << rncg::report::num(rec.alpha) << ',' << rec.backtracks << '\n';
    }
    rncg::report::write_file(path_in(o.out, id + "_trace.csv"), os.str());
  }

  switch (r.status) {
    case rncg::RunStatus::Critical: return kExitOk;
    case rncg::RunStatus::MaxIters: return kExitMaxIters;
    default: return kExitFailure;
  }
}

void write_front(const rncg::Manifest& m, const std::string& id, const rncg::MethodFront& f, int n, int mo) {
  const std::string stem = path_in(m.out_dir, id + "_" + f.solver_id);
  if (m.emit_csv) {
    rncg::report::write_file(stem + "_front.csv", rncg::front_csv(f, n, mo));
    rncg::report::write_file(stem + "_runs.csv", rncg::runs_csv(f, mo));
  }
  if (f.archive.points.empty())
    rncg::report::write_file(stem + "_EMPTY", "no certified critical point among " + std::to_string(f.runs.size()) + " runs\n");
}

int cmd_front(const Options& o) {
  const rncg::Manifest m = build_manifest(o, {});
  bool empty = false;
  for (const auto& id : m.problems) {
    const rncg::UncertainProblem problem = rncg::suite::build(id);
    const rncg::MethodFront f = rncg::run_ncg_front(problem, m);
    write_front(m, id, f, problem.n, problem.m);
    if (m.emit_svg)
      rncg::report::write_file(path_in(m.out_dir, id + "_" + f.solver_id + "_front.svg"),
                               rncg::front_svg(id + " front", {&f}, problem.m));
    std::printf("%s: %zu nondominated critical points from %d starts\n", id.c_str(), f.archive.points.size(), m.starts);
    empty = empty || f.archive.points.empty();
  }
  return empty ? kExitFailure : kExitOk;
}

bool emit_comparison(const rncg::Manifest& m, const rncg::Comparison& c) {
  bool empty = false;
  for (const auto& f : c.methods) {
    write_front(m, c.problem_id, f, c.n, c.m);
    empty = empty || f.archive.points.empty();
  }
  if (m.emit_json) rncg::report::write_file(path_in(m.out_dir, c.problem_id + "_metrics.json"), rncg::comparison_json(c));
  if (m.emit_svg) {
    std::vector<const rncg::MethodFront*> fs;
    for (const auto& f : c.methods) fs.push_back(&f);
    rncg::report::write_file(path_in(m.out_dir, c.problem_id + "_compare.svg"),
                             rncg::front_svg(c.problem_id + " fronts", fs, c.m));
  }
  return empty;
}

int cmd_compare(const Options& o) {
  const rncg::Manifest m = build_manifest(o, {});
  bool empty = false;
  for (const auto& id : m.problems) {
    const rncg::Comparison c = rncg::run_compare(id, m);
    empty = emit_comparison(m, c) || empty;
    for (std::size_t k = 0; k < c.methods.size(); ++k)
      std::printf("%s %-14s front %3zu  iterations %8lld  evaluations %10lld\n", id.c_str(),
                  c.methods[k].solver_id.c_str(), c.metrics[k].front_size,
                  static_cast<long long>(c.metrics[k].iterations),
                  static_cast<long long>(c.metrics[k].function_evaluations));
  }
  return empty ? kExitFailure : kExitOk;
}

int cmd_profile(const Options& o) {
  const rncg::Manifest m = build_manifest(o, rncg::suite::profile_suite_ids());
  std::vector<rncg::Comparison> done;
  std::vector<std::string> skipped;
  for (const auto& id : m.problems) {
    try {
      done.push_back(rncg::run_compare(id, m));
    } catch (const std::exception& e) {
      skipped.push_back(id + ": " + e.what());
      continue;
    }
    emit_comparison(m, done.back());
    std::fprintf(stderr, "%s done\n", id.c_str());
  }
  const rncg::ProfileKinds kinds = rncg::build_profiles(done);
  if (m.emit_csv) rncg::report::write_file(path_in(m.out_dir, "profile.csv"), rncg::profile_csv(kinds));
  if (m.emit_json) rncg::report::write_file(path_in(m.out_dir, "profile.json"), rncg::profile_json(kinds, skipped));
  if (m.emit_svg) {
    rncg::report::write_file(path_in(m.out_dir, "profile_iterations.svg"), rncg::profile_svg("iterations", kinds.iterations));
    rncg::report::write_file(path_in(m.out_dir, "profile_function_evaluations.svg"),
                             rncg::profile_svg("function evaluations", kinds.function_evaluations));
    rncg::report::write_file(path_in(m.out_dir, "profile_delta_spread.svg"), rncg::profile_svg("delta spread", kinds.delta_spread));
    rncg::report::write_file(path_in(m.out_dir, "profile_inverse_hypervolume.svg"),
                             rncg::profile_svg("1 / hypervolume", kinds.inverse_hypervolume));
  }
  for (std::size_t s = 0; s < kinds.iterations.solvers.size(); ++s)
    std::printf("%-14s rho(1): iterations %.3f  evaluations %.3f  spread %.3f  hypervolume %.3f\n",
                kinds.iterations.solvers[s].c_str(), kinds.iterations.rho_at(s, 1.0),
                kinds.function_evaluations.rho_at(s, 1.0), kinds.delta_spread.rho_at(s, 1.0),
                kinds.inverse_hypervolume.rho_at(s, 1.0));
  for (const auto& s : skipped) std::printf("skipped %s\n", s.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  std::string positional;
  CLI::App app{"Robust multiobjective nonlinear conjugate gradient solver"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list the registered problems");
  auto* solve = app.add_subcommand("solve", "single run with a per-iteration table");
  add_solver_flags(solve, o);
  solve->add_option("id", positional, "problem id");
  solve->add_option("--problem", o.problems, "problem id");
  solve->add_option("--out", o.out, "directory for the trace CSV");
  solve->add_option("--x0", o.x0, "start point")->delimiter(',')->allow_extra_args(false);
  solve->add_flag("--center", o.center, "start at the box center (default)");
  auto* front = app.add_subcommand("front", "multi-start front");
  add_batch_flags(front, o);
  auto* compare = app.add_subcommand("compare", "conjugate gradient vs weighted sum");
  add_batch_flags(compare, o);
  auto* profile = app.add_subcommand("profile", "performance profiles over the suite");
  add_batch_flags(profile, o);

  try {
    std::vector<std::string> args = expand_manifest(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*list) return cmd_list();
    if (*solve) return cmd_solve(o, positional);
    if (*front) return cmd_front(o);
    if (*compare) return cmd_compare(o);
    if (*profile) return cmd_profile(o);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const rncg::report::OutputError& e) {
    std::fprintf(stderr, "output error: %s\n", e.what());
    return kExitOutput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
