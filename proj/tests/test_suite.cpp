#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "helpers.hpp"
#include "rncg/rng.hpp"
#include "rncg/suite.hpp"

using namespace rncg;
using testing::vec;

namespace {

struct Row {
  const char* id;
  int m, n, p;
  Vector lb, ub;
};

// Dimensions and boxes as tabulated for the test set.
std::vector<Row> table() {
  const auto c = [](int n, double v) { return Vector::Constant(n, v); };
  return {
      {"tp1", 2, 1, 2, c(1, -5), c(1, 5)},
      {"tp1-ex", 2, 1, 2, c(1, -5), c(1, 5)},
      {"tp2", 2, 2, 2, c(2, -4), c(2, 4)},
      {"tp3", 2, 3, 3, c(3, 0), c(3, 1)},
      {"tp4", 3, 3, 3, vec({1, -2, 0}), vec({3.5, 2, 1})},
      {"tp5", 2, 2, 2, c(2, -6), vec({6, 4})},
      {"tp6", 2, 1, 2, c(1, -3), c(1, 3)},
      {"tp7", 3, 3, 3, c(3, -1), c(3, 5)},
      {"tp8", 3, 2, 3, c(2, -1), vec({5, 2})},
      {"tp9", 3, 2, 3, c(2, -1), c(2, 0)},
      {"tp10", 2, 2, 2, c(2, -2), c(2, 5)},
      {"tp11", 2, 2, 2, c(2, -6), vec({6, 4})},
      {"tp12", 2, 1, 2, c(1, -100), c(1, 100)},
      {"tp13", 2, 2, 2, c(2, 0), c(2, 1)},
      {"tp14", 3, 2, 3, c(2, 1), c(2, 3)},
      {"tp15", 2, 2, 3, c(2, 0.001), c(2, 1)},
      {"tp16", 3, 10, 3, c(10, 0.001), c(10, 1)},
      {"tp17", 2, 2, 2, c(2, -4), c(2, 5)},
      {"tp18", 2, 1, 2, c(1, -6), c(1, 6)},
      {"tp19", 3, 3, 3, vec({1, -2, 0}), vec({3.5, 2, 1})},
      {"tp20", 3, 3, 3, vec({-1, -2, -1}), vec({4, 5, 3.4})},
  };
}

}  // namespace

TEST_CASE("registry matches the table of test problems") {
  const auto specs = suite::list_problems();
  const auto rows = table();
  REQUIRE(specs.size() == 21);
  std::set<std::string> ids;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CAPTURE(rows[k].id);
    CHECK(specs[k].id == rows[k].id);
    CHECK(specs[k].m == rows[k].m);
    CHECK(specs[k].n == rows[k].n);
    CHECK(specs[k].p == rows[k].p);
    CHECK(specs[k].lower_bound == rows[k].lb);
    CHECK(specs[k].upper_bound == rows[k].ub);
    const auto p = suite::build(rows[k].id);
    CHECK(static_cast<int>(p.scenarios.size()) == rows[k].p);
    CHECK(p.m == rows[k].m);
    CHECK(p.n == rows[k].n);
    ids.insert(specs[k].id);
  }
  CHECK(ids.size() == 21);
  CHECK(suite::profile_suite_ids().size() == 20);
  CHECK_THROWS_AS(suite::build("tp99"), std::invalid_argument);
  CHECK_FALSE(suite::has_problem("tp99"));
}

TEST_CASE("spot values") {
  CHECK(suite::build("tp2").value_fn(vec({1, 3}), 0, 0) == 0.0);
  const auto ex = suite::build("tp1-ex");
  CHECK(ex.value_fn(Vector::Constant(1, -0.6310622), 1, 0) == doctest::Approx(-1.02930171).epsilon(1e-8));
  const auto p1 = suite::build("tp1");
  CHECK(p1.value_fn(Vector::Constant(1, 2.0), 1, 1) == 10.0);  // x^2 + 3x
  // tp3 vanishes at x = 1/sqrt(3) (1,1,1) in the first objective.
  const auto p3 = suite::build("tp3");
  CHECK(std::abs(p3.value_fn(Vector::Constant(3, 1.0 / std::sqrt(3.0)), 0, 2)) <= 1e-15);
  // tp16 with x = w on the distance variables: g = 0.
  const auto p16 = suite::build("tp16");
  Vector x = Vector::Constant(10, 0.5);
  x[0] = 0.0;
  x[1] = 0.0;
  CHECK(p16.value_fn(x, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("evaluators are finite on random points and deterministic") {
  for (const auto& spec : suite::list_problems()) {
    CAPTURE(spec.id);
    const auto p = suite::build(spec.id);
    for (int s = 0; s < 100; ++s) {
      SplitMix64 rng = SplitMix64::stream(123, static_cast<std::uint64_t>(s));
      const Vector x = sample_box(rng, p.lower_bound, p.upper_bound);
      for (int j = 0; j < p.m; ++j) {
        for (int i = 0; i < p.p; ++i) {
          const double a = p.value_fn(x, j, i);
          CHECK(std::isfinite(a));
          CHECK(a == p.value_fn(x, j, i));
        }
      }
    }
  }
}

TEST_CASE("analytic gradients agree with forward differences") {
  for (const auto& spec : suite::list_problems()) {
    CAPTURE(spec.id);
    const auto p = suite::build(spec.id);
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      SplitMix64 rng = SplitMix64::stream(456, static_cast<std::uint64_t>(s));
      const Vector x = sample_box(rng, p.lower_bound, p.upper_bound);
      const double step = std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.lpNorm<Eigen::Infinity>());
      for (int j = 0; j < p.m; ++j) {
        for (int i = 0; i < p.p; ++i) {
          const Vector g = gradient(p, x, j, i);
          const Vector fd = fd_gradient(p, x, j, i, step);
          worst = std::max(worst, (g - fd).norm() / (1.0 + g.norm()));
        }
      }
    }
    CHECK(worst <= 1e-4);
  }
}
