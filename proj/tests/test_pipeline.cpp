#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "helpers.hpp"
#include "rncg/batch.hpp"
#include "rncg/pipeline.hpp"
#include "rncg/suite.hpp"

using namespace rncg;

namespace {

bool same_run(const RunOutcome& a, const RunOutcome& b) {
  if (a.result.has_value() != b.result.has_value() || a.error != b.error) return false;
  if (!a.result) return true;
  const auto& x = *a.result;
  const auto& y = *b.result;
  return x.status == y.status && x.final_x == y.final_x && x.iterations == y.iterations &&
         x.evaluation_counts.fun == y.evaluation_counts.fun && x.evaluation_counts.grad == y.evaluation_counts.grad;
}

Manifest small(std::vector<std::string> ids, int starts) {
  Manifest m;
  m.problems = std::move(ids);
  m.starts = starts;
  m.seed = 7;
  m.ncg.max_iters = 500;
  m.weighted.max_iters = 500;
  return m;
}

}  // namespace

TEST_CASE("start sampling is a pure function of (seed, index)") {
  const auto p = suite::build("tp4");
  const auto a = sample_starts(p, 10, 42);
  const auto b = sample_starts(p, 20, 42);
  for (int k = 0; k < 10; ++k) CHECK(a[k] == b[k]);
  CHECK(sample_start(p, 42, 3) == a[3]);
  CHECK(sample_start(p, 43, 3) != a[3]);
  for (const auto& x : b) {
    CHECK((x.array() >= p.lower_bound.array()).all());
    CHECK((x.array() <= p.upper_bound.array()).all());
  }
}

TEST_CASE("parallel kernel matches the serial reference") {
  for (const char* id : {"tp1-ex", "tp4", "tp10"}) {
    const auto p = suite::build(id);
    SolverConfig c;
    c.max_iters = 300;
    c.record_trace = false;
    const auto starts = sample_starts(p, 16, 5);
    const auto serial = run_multistart(p, starts, c, Execution::Serial);
    const auto parallel = run_multistart(p, starts, c, Execution::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t k = 0; k < serial.size(); ++k) CHECK(same_run(serial[k], parallel[k]));

    const auto sched = generate_weights(p.m, 8, 5);
    const auto ws = run_weight_schedule(p, sched, std::nullopt, weighted_default_config(), Execution::Serial);
    const auto wp = run_weight_schedule(p, sched, std::nullopt, weighted_default_config(), Execution::Parallel);
    for (std::size_t k = 0; k < ws.size(); ++k) CHECK(same_run(ws[k], wp[k]));
  }
}

TEST_CASE("bad starts are captured per run") {
  const auto p = suite::build("tp2");
  std::vector<Vector> starts{Vector::Zero(2), Vector::Zero(3)};
  const auto out = run_multistart(p, starts, SolverConfig{}, Execution::Parallel);
  CHECK(out[0].result.has_value());
  CHECK_FALSE(out[1].result.has_value());
  CHECK_FALSE(out[1].error.empty());
}

TEST_CASE("front archive holds only certified, mutually nondominated points") {
  const auto p = suite::build("tp1-ex");
  const auto f = run_ncg_front(p, small({"tp1-ex"}, 30));
  REQUIRE_FALSE(f.archive.points.empty());
  for (const auto& pt : f.archive.points) {
    CHECK(criticality_certificate(p, pt.x).is_critical);
    CHECK(pt.F == robust_value(p, pt.x).robust);
  }
  for (std::size_t a = 0; a < f.archive.points.size(); ++a)
    for (std::size_t b = 0; b < f.archive.points.size(); ++b)
      if (a != b) CHECK_FALSE(dominates(f.archive.points[a].F, f.archive.points[b].F));
  std::int64_t fun = 0, iters = 0;
  for (const auto& r : f.runs) {
    fun += r.fun;
    iters += r.iterations;
  }
  CHECK(f.fun == fun);
  CHECK(f.function_evaluations(p.n) == fun + p.n * iters);

  const auto one = run_ncg_front(p, small({"tp1-ex"}, 1));
  CHECK(one.archive.points.size() == 1);
}

TEST_CASE("baseline front points come from distinct weight runs") {
  const auto p = suite::build("tp2");
  const auto f = run_weighted_front(p, small({"tp2"}, 20));
  std::set<std::string> sources;
  for (const auto& pt : f.archive.points) {
    CHECK(pt.source.rfind("weight-", 0) == 0);
    CHECK(sources.insert(pt.source).second);
    const auto& run = f.runs[std::stoul(pt.source.substr(7))];
    CHECK(run.x == pt.x);
    CHECK(pt.F == robust_value(p, pt.x).robust);
  }
}

TEST_CASE("comparison outputs are deterministic and schema-shaped") {
  const auto m = small({"tp1-ex"}, 12);
  const auto a = run_compare("tp1-ex", m);
  Manifest serial = m;
  serial.exec = Execution::Serial;
  const auto b = run_compare("tp1-ex", serial);
  CHECK(comparison_json(a) == comparison_json(b));
  CHECK(front_csv(a.methods[0], a.n, a.m) == front_csv(b.methods[0], b.n, b.m));

  const auto j = nlohmann::json::parse(comparison_json(a));
  CHECK(j["schema"] == "v1");
  REQUIRE(j["methods"].size() == 2);
  for (const auto& e : j["methods"]) {
    for (const char* k : {"delta_spread", "hypervolume", "iterations", "function_evaluations"}) CHECK(e.contains(k));
  }
  const std::string csv = front_csv(a.methods[0], a.n, a.m);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == a.methods[0].archive.points.size() + 1);
}

TEST_CASE("empty comparison still serialises") {
  Comparison c;
  c.problem_id = "none";
  c.n = 1;
  c.m = 2;
  MethodFront f;
  f.solver_id = "ncg-fr";
  c.methods.push_back(f);
  compute_metrics(c);
  const auto j = nlohmann::json::parse(comparison_json(c));
  CHECK(j["methods"][0]["front"].empty());
  CHECK(j["reference"].is_null());
  CHECK(j["methods"][0]["hypervolume"].is_null());
}

TEST_CASE("profiles from comparisons treat missing fronts as failures") {
  const auto m = small({"tp1-ex"}, 6);
  auto a = run_compare("tp1-ex", m);
  auto b = a;
  b.problem_id = "copy";
  b.methods[1].archive.points.clear();
  compute_metrics(b);
  const auto kinds = build_profiles({a, b});
  CHECK(std::isinf(kinds.iterations.costs(1, 1)));
  CHECK(kinds.iterations.rho(kinds.iterations.rho.rows() - 1, 1) <= 0.5);
  const auto csv = profile_csv(kinds);
  CHECK(csv.rfind("kind,solver,tau,rho\n", 0) == 0);
}
