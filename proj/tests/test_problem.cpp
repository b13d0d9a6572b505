#include <doctest.h>

#include "helpers.hpp"
#include "rncg/errors.hpp"
#include "rncg/problem.hpp"
#include "rncg/rng.hpp"
#include "rncg/suite.hpp"

using namespace rncg;
using testing::v1;
using testing::vec;

TEST_CASE("scenario matrix at the tp1-ex start point") {
  const auto p = suite::build("tp1-ex");
  EvalCounter c;
  const Matrix h = evaluate_scenarios(p, v1(-0.6310622), &c);
  CHECK(h(0, 0) == doctest::Approx(0.1361151).epsilon(1e-6));
  CHECK(std::abs(h(0, 1) - 13.18461274) <= 1e-6);
  CHECK(h(1, 0) == doctest::Approx(-1.02930171).epsilon(1e-8));
  CHECK(h(1, 1) == doctest::Approx(1.49494711).epsilon(1e-8));
  CHECK(c.fun == 4);
  CHECK(c.grad == 0);
}

TEST_CASE("scenario matrix at trivial points") {
  const Matrix a = evaluate_scenarios(suite::build("tp1-ex"), v1(0.0));
  CHECK(a(0, 0) == 1.0);
  CHECK(a(0, 1) == 9.0);
  CHECK(a(1, 0) == 0.0);
  CHECK(a(1, 1) == 0.0);
  const Matrix b = evaluate_scenarios(suite::build("tp2"), vec({0, 0}));
  CHECK(b(0, 0) == 10.0);
  CHECK(b(0, 1) == 10.0);
  CHECK(b(1, 0) == 0.0);
  CHECK(b(1, 1) == 0.0);
}

TEST_CASE("robust value and active sets") {
  const auto p = suite::build("tp1-ex");
  const auto r = robust_value(p, v1(-0.6310622));
  CHECK(std::abs(r.robust[0] - 13.18461274) <= 1e-6);
  CHECK(r.robust[1] == doctest::Approx(1.49494711).epsilon(1e-8));
  CHECK(r.active[0] == std::vector<int>{1});
  CHECK(r.active[1] == std::vector<int>{1});

  const auto at1 = robust_value(p, v1(1.0), 1e-6);
  CHECK(at1.active[0] == std::vector<int>{0, 1});
  CHECK(at1.active[1] == std::vector<int>{0});

  const auto at0 = robust_value(p, v1(0.0));
  CHECK(at0.robust[0] == 9.0);
  CHECK(at0.robust[1] == 0.0);
}

TEST_CASE("robust max is exact and active sets are sound") {
  for (const auto& spec : suite::list_problems()) {
    const auto p = suite::build(spec.id);
    for (int s = 0; s < 10; ++s) {
      SplitMix64 rng = SplitMix64::stream(11, static_cast<std::uint64_t>(s));
      const Vector x = sample_box(rng, p.lower_bound, p.upper_bound);
      const auto r = robust_value(p, x, 0.0);
      for (int j = 0; j < p.m; ++j) {
        CHECK(r.robust[j] == r.values.row(j).maxCoeff());
        REQUIRE_FALSE(r.active[j].empty());
        for (int i = 0; i < p.p; ++i) {
          const bool listed = std::find(r.active[j].begin(), r.active[j].end(), i) != r.active[j].end();
          CHECK(listed == (r.values(j, i) == r.robust[j]));
        }
      }
    }
  }
}

TEST_CASE("analytic gradients at hand-checked points") {
  CHECK(gradient(suite::build("tp1"), v1(0.0), 0, 0)[0] == 2.0);
  CHECK(gradient(suite::build("tp1-ex"), v1(-0.6310622), 1, 1)[0] == doctest::Approx(-1.7378756).epsilon(1e-9));
  const Vector g = gradient(suite::build("tp2"), vec({1, 1}), 1, 0);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 6.0);
}

TEST_CASE("forward differences") {
  const auto sq = testing::square_problem();
  EvalCounter c;
  const Vector g = fd_gradient(sq, v1(1.0), 0, 0, 1e-6, &c);
  CHECK(g[0] == doctest::Approx(2.0 + 1e-6).epsilon(1e-9));
  CHECK(c.fun == 2);

  const Vector t = fd_gradient(suite::build("tp1"), v1(0.0), 0, 1, 1e-6);
  CHECK(std::abs(t[0] - (-6.0)) <= 1e-5);

  const auto p16 = suite::build("tp16");
  EvalCounter c16;
  fd_gradient(p16, p16.center(), 2, 1, default_fd_step(p16.center()), &c16);
  CHECK(c16.fun == p16.n + 1);
}

TEST_CASE("missing analytic gradient falls back to forward differences") {
  auto p = testing::smooth_problem(2, [](const Vector& x) { return x.squaredNorm(); }, nullptr);
  EvalCounter c;
  const Vector g = gradient(p, vec({1.0, -2.0}), 0, 0, &c);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(g[1] == doctest::Approx(-4.0).epsilon(1e-5));
  CHECK(c.fun == 3);
}

TEST_CASE("non-finite evaluations raise errors carrying the pair") {
  auto p = testing::smooth_problem(
      1, [](const Vector& x) { return x[0] > 0 ? std::nan("") : 0.0; },
      [](const Vector& x) { return Vector::Constant(1, x[0] > 0 ? INFINITY : 0.0); });
  CHECK_THROWS_AS(robust_value(p, v1(1.0)), EvaluationError);
  CHECK_THROWS_AS(gradient(p, v1(1.0), 0, 0), GradientError);
  try {
    evaluate_scenarios(p, v1(2.0));
  } catch (const EvaluationError& e) {
    CHECK(e.objective == 0);
    CHECK(e.scenario == 0);
    CHECK(e.point[0] == 2.0);
  }
}

TEST_CASE("criticality certificates") {
  const auto p = suite::build("tp1-ex");
  const auto star = criticality_certificate(p, v1(1.15531051));
  CHECK(star.is_critical);
  CHECK(star.min_norm <= 1e-6);
  CHECK(star.witness_weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(star.witness_weights.minCoeff() >= 0.0);

  // Scenario w = -1 of the second objective is active at 0 with slope +1,
  // opposing the slopes -6 and -3 of the other active pairs.
  const auto zero = criticality_certificate(p, v1(0.0));
  CHECK(zero.active_pairs.size() == 3);
  CHECK(zero.is_critical);

  const auto start = criticality_certificate(p, v1(-0.6310622));
  CHECK_FALSE(start.is_critical);
  CHECK(start.min_norm == doctest::Approx(1.7378756).epsilon(1e-7));

  const auto flat = criticality_certificate(testing::square_problem(), v1(0.0));
  CHECK(flat.is_critical);
  CHECK(flat.min_norm == 0.0);
}

TEST_CASE("symmetric active gradients certify with zero norm") {
  UncertainProblem p;
  p.name = "sym";
  p.n = 2;
  p.m = 2;
  p.p = 1;
  p.scenarios = {Vector::Zero(1)};
  p.lower_bound = Vector::Constant(2, -1);
  p.upper_bound = Vector::Constant(2, 1);
  const Vector d = vec({0.3, -1.7});
  p.value_fn = [d](const Vector& x, int j, int) { return (j == 0 ? 1.0 : -1.0) * d.dot(x); };
  p.gradient_fn = [d](const Vector&, int j, int) { return Vector((j == 0 ? 1.0 : -1.0) * d); };
  const auto c = criticality_certificate(p, vec({0.4, 0.2}));
  CHECK(c.min_norm <= 1e-8);
  CHECK(c.is_critical);
}

TEST_CASE("problem validation") {
  auto p = suite::build("tp2");
  p.lower_bound[0] = 10.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(robust_value(suite::build("tp2"), v1(0.0)), std::invalid_argument);
}
