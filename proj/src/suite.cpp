#include "rncg/suite.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace rncg::suite {

namespace {

using PieceValue = std::function<double(const Vector& x, int j, const Vector& w)>;
using PieceGrad = std::function<Vector(const Vector& x, int j, const Vector& w)>;

struct Entry {
  ProblemSpec spec;
  std::vector<Vector> scenarios;
  PieceValue value;
  PieceGrad grad;
};

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double d : v) out[k++] = d;
  return out;
}

Vector g1(double a) { return vec({a}); }
Vector g2(double a, double b) { return vec({a, b}); }
Vector g3(double a, double b, double c) { return vec({a, b, c}); }

Entry make(std::string id, int m, int n, std::vector<Vector> scenarios, Vector lb, Vector ub,
           PieceValue value, PieceGrad grad, std::string note = {}) {
  Entry e;
  e.spec.id = std::move(id);
  e.spec.m = m;
  e.spec.n = n;
  e.spec.p = static_cast<int>(scenarios.size());
  e.spec.lower_bound = std::move(lb);
  e.spec.upper_bound = std::move(ub);
  e.spec.note = std::move(note);
  e.scenarios = std::move(scenarios);
  e.value = std::move(value);
  e.grad = std::move(grad);
  return e;
}

// (x - w)^2 and -x^2 - w x; shared by tp1-ex, tp6 and tp12.
Entry concave_pair(std::string id, double w1, double w2, double bound, std::string note = {}) {
  return make(
      std::move(id), 2, 1, {g1(w1), g1(w2)}, g1(-bound), g1(bound),
      [](const Vector& x, int j, const Vector& w) {
        const double t = x[0], o = w[0];
        return j == 0 ? (t - o) * (t - o) : -t * t - o * t;
      },
      [](const Vector& x, int j, const Vector& w) {
        const double t = x[0], o = w[0];
        return g1(j == 0 ? 2.0 * (t - o) : -2.0 * t - o);
      },
      std::move(note));
}

// (x1 - a)^2 + (x2 + b)^2 and (a x1 + b x2)^2; tp5 and tp13.
Entry shifted_quadratics(std::string id, std::vector<Vector> w, Vector lb, Vector ub) {
  return make(
      std::move(id), 2, 2, std::move(w), std::move(lb), std::move(ub),
      [](const Vector& x, int j, const Vector& w) {
        if (j == 0) return std::pow(x[0] - w[0], 2) + std::pow(x[1] + w[1], 2);
        return std::pow(w[0] * x[0] + w[1] * x[1], 2);
      },
      [](const Vector& x, int j, const Vector& w) {
        if (j == 0) return g2(2.0 * (x[0] - w[0]), 2.0 * (x[1] + w[1]));
        const double r = w[0] * x[0] + w[1] * x[1];
        return g2(2.0 * r * w[0], 2.0 * r * w[1]);
      });
}

// Rosenbrock-type triple; tp9 and tp14.
Entry rosenbrock_triple(std::string id, std::vector<Vector> w, Vector lb, Vector ub) {
  return make(
      std::move(id), 3, 2, std::move(w), std::move(lb), std::move(ub),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        switch (j) {
          case 0: return 100.0 * a * std::pow(x[1] - x[0] * x[0], 2) + b * std::pow(1.0 - x[0], 2);
          case 1: return std::pow(x[1] - a, 2) + b * x[0] * x[0];
          default: return a * x[0] * x[0] + 3.0 * b * x[1] * x[1];
        }
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        switch (j) {
          case 0: {
            const double r = x[1] - x[0] * x[0];
            return g2(-400.0 * a * x[0] * r - 2.0 * b * (1.0 - x[0]), 200.0 * a * r);
          }
          case 1: return g2(2.0 * b * x[0], 2.0 * (x[1] - a));
          default: return g2(2.0 * a * x[0], 6.0 * b * x[1]);
        }
      });
}

// Product of one-variable factors, with its gradient.
struct Factor {
  int index;
  std::function<double(double)> f;
  std::function<double(double)> df;
};

double product(const std::vector<Factor>& fs, const Vector& x) {
  double p = 1.0;
  for (const auto& f : fs) p *= f.f(x[f.index]);
  return p;
}

Vector product_gradient(const std::vector<Factor>& fs, const Vector& x) {
  Vector g = Vector::Zero(x.size());
  for (std::size_t a = 0; a < fs.size(); ++a) {
    double term = fs[a].df(x[fs[a].index]);
    for (std::size_t b = 0; b < fs.size(); ++b)
      if (b != a) term *= fs[b].f(x[fs[b].index]);
    g[fs[a].index] += term;
  }
  return g;
}

// DTLZ-style families: h_j = coef_j (1 + g(x, w)) P_j(x).
struct Dtlz {
  int m;
  std::function<double(const Vector&, const Vector&)> g;
  std::function<Vector(const Vector&, const Vector&)> dg;
  std::function<double(int)> coef;
  std::function<std::vector<Factor>(int)> factors;

  double value(const Vector& x, int j, const Vector& w) const {
    return coef(j) * (1.0 + g(x, w)) * product(factors(j), x);
  }
  Vector gradient(const Vector& x, int j, const Vector& w) const {
    const auto fs = factors(j);
    return coef(j) * (dg(x, w) * product(fs, x) + (1.0 + g(x, w)) * product_gradient(fs, x));
  }
};

Entry dtlz_entry(std::string id, int m, int n, std::vector<double> levels, double lb, double ub,
                 Dtlz d, std::string note) {
  std::vector<Vector> w;
  for (double c : levels) w.push_back(Vector::Constant(n, c));
  return make(
      std::move(id), m, n, std::move(w), Vector::Constant(n, lb), Vector::Constant(n, ub),
      [d](const Vector& x, int j, const Vector& w) { return d.value(x, j, w); },
      [d](const Vector& x, int j, const Vector& w) { return d.gradient(x, j, w); },
      std::move(note));
}

Entry tp15() {
  constexpr int m = 2, n = 2;
  constexpr double K = m + n - 1;
  const double two_pi_ten = 20.0 * std::numbers::pi;
  Dtlz d;
  d.m = m;
  d.g = [=](const Vector& x, const Vector& w) {
    double s = 0.0;
    for (int k = m - 1; k < n; ++k) {
      const double r = x[k] - w[k];
      s += r * r - std::cos(two_pi_ten * r);
    }
    return 100.0 * (K + s);
  };
  d.dg = [=](const Vector& x, const Vector& w) {
    Vector out = Vector::Zero(n);
    for (int k = m - 1; k < n; ++k) {
      const double r = x[k] - w[k];
      out[k] = 100.0 * (2.0 * r + two_pi_ten * std::sin(two_pi_ten * r));
    }
    return out;
  };
  d.coef = [](int) { return 0.5; };
  d.factors = [=](int j) {
    std::vector<Factor> fs;
    const auto ident = [](double t) { return t; };
    const auto one = [](double) { return 1.0; };
    for (int k = 0; k < m - 1 - j; ++k) fs.push_back({k, ident, one});
    if (j > 0) fs.push_back({m - 1 - j, [](double t) { return 1.0 - t; }, [](double) { return -1.0; }});
    return fs;
  };
  return dtlz_entry("tp15", m, n, {0.25, 0.5, 0.75}, 0.001, 1.0, d,
                    "distance term read as (x_k - w_k) for k = m..n; (1 - x_{m-j+1}) multiplies the product");
}

Entry tp16() {
  constexpr int m = 3, n = 10;
  const double half_pi = 0.5 * std::numbers::pi;
  Dtlz d;
  d.m = m;
  d.g = [=](const Vector& x, const Vector& w) {
    double s = 0.0;
    for (int k = m - 1; k < n; ++k) s += (x[k] - w[k]) * (x[k] - w[k]);
    return s;
  };
  d.dg = [=](const Vector& x, const Vector& w) {
    Vector out = Vector::Zero(n);
    for (int k = m - 1; k < n; ++k) out[k] = 2.0 * (x[k] - w[k]);
    return out;
  };
  d.coef = [](int j) { return j == 0 ? 1.0 : 0.5; };
  d.factors = [=](int j) {
    std::vector<Factor> fs;
    const auto c = [=](double t) { return std::cos(half_pi * t); };
    const auto dc = [=](double t) { return -half_pi * std::sin(half_pi * t); };
    const auto s = [=](double t) { return std::sin(half_pi * t); };
    const auto ds = [=](double t) { return half_pi * std::cos(half_pi * t); };
    if (j == 0) {
      for (int k = 1; k <= m - 1; ++k) fs.push_back({k - 1, c, dc});
    } else {
      // prod_{k=1}^{m-j} cos(pi x_k / 2) sin(pi x_{m-k+1} / 2), one-based.
      for (int k = 1; k <= m - (j + 1); ++k) {
        fs.push_back({k - 1, c, dc});
        fs.push_back({m - k, s, ds});
      }
    }
    return fs;
  };
  return dtlz_entry("tp16", m, n, {0.4, 0.5, 0.6}, 0.001, 1.0, d,
                    "distance term read as (x_k - w_k); sine index m-k+1 kept inside the product as printed");
}

std::vector<Entry> make_registry() {
  std::vector<Entry> r;

  r.push_back(make(
      "tp1", 2, 1, {g1(-1), g1(3)}, g1(-5), g1(5),
      [](const Vector& x, int j, const Vector& w) {
        const double t = x[0], o = w[0];
        return j == 0 ? (t - o) * (t - o) : t * t + o * t;
      },
      [](const Vector& x, int j, const Vector& w) {
        const double t = x[0], o = w[0];
        return g1(j == 0 ? 2.0 * (t - o) : 2.0 * t + o);
      }));

  r.push_back(concave_pair("tp1-ex", -1, 3, 5, "second objective -x^2 - w x"));

  r.push_back(make(
      "tp2", 2, 2, {g2(1, 3), g2(3, 1)}, g2(-4, -4), g2(4, 4),
      [](const Vector& x, int j, const Vector& w) {
        if (j == 0) return std::pow(x[0] - w[0], 2) + std::pow(x[1] - w[1], 2);
        return w[0] * x[0] * x[0] + w[1] * x[1] * x[1];
      },
      [](const Vector& x, int j, const Vector& w) {
        if (j == 0) return g2(2.0 * (x[0] - w[0]), 2.0 * (x[1] - w[1]));
        return g2(2.0 * w[0] * x[0], 2.0 * w[1] * x[1]);
      }));

  r.push_back(make(
      "tp3", 2, 3, {g3(1, 1, 1), g3(1, -1, 1), g3(1, -2, 2)}, g3(0, 0, 0), g3(1, 1, 1),
      [](const Vector& x, int j, const Vector& w) {
        const double shift = (j == 0 ? -1.0 : 1.0) / std::sqrt(3.0);
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += w[k] * std::pow(x[k] + shift, 2);
        return 1.0 - std::exp(-s);
      },
      [](const Vector& x, int j, const Vector& w) {
        const double shift = (j == 0 ? -1.0 : 1.0) / std::sqrt(3.0);
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += w[k] * std::pow(x[k] + shift, 2);
        const double e = std::exp(-s);
        Vector g(3);
        for (int k = 0; k < 3; ++k) g[k] = e * 2.0 * w[k] * (x[k] + shift);
        return g;
      },
      "exponent weight read as the k-th component of scenario i"));

  r.push_back(make(
      "tp4", 3, 3, {g3(1, 1, 1), g3(1, -1, 1), g3(1, -2, 2)}, g3(1, -2, 0), g3(3.5, 2, 1),
      [](const Vector& x, int j, const Vector& w) {
        const double a = 1.0 + w[2] * x[2];
        if (j == 2) return a * w[0] * x[0] * x[0];
        const double sign = j == 0 ? -1.0 : 1.0;
        return a * (w[0] * w[1] * std::pow(x[0], 3) * std::pow(x[1], 3) - 10.0 * w[0] * x[0] +
                    sign * 4.0 * w[1] * x[1]);
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = 1.0 + w[2] * x[2];
        if (j == 2) return g3(a * 2.0 * w[0] * x[0], 0.0, w[2] * w[0] * x[0] * x[0]);
        const double sign = j == 0 ? -1.0 : 1.0;
        const double cub = w[0] * w[1] * std::pow(x[0], 3) * std::pow(x[1], 3);
        const double b = cub - 10.0 * w[0] * x[0] + sign * 4.0 * w[1] * x[1];
        return g3(a * (3.0 * w[0] * w[1] * x[0] * x[0] * std::pow(x[1], 3) - 10.0 * w[0]),
                  a * (3.0 * w[0] * w[1] * std::pow(x[0], 3) * x[1] * x[1] + sign * 4.0 * w[1]),
                  w[2] * b);
      }));

  r.push_back(shifted_quadratics("tp5", {g2(2, 2), g2(0, 4)}, g2(-6, -6), g2(6, 4)));
  r.push_back(concave_pair("tp6", -2, 5, 3));

  r.push_back(make(
      "tp7", 3, 3, {g2(4, 1), g2(0, 2), g2(1, 0)}, g3(-1, -1, -1), g3(5, 5, 5),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        switch (j) {
          case 0: return x[0] * x[0] + std::pow(x[1] - a, 2) - b * x[2] * x[2];
          case 1: return a * x[0] + b * x[1] * x[1] + x[2] + 4.0 * a * b;
          default: return a * x[0] * x[0] + 6.0 * x[1] * x[1] + 25.0 * std::pow(x[2] - b * x[0], 2);
        }
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        switch (j) {
          case 0: return g3(2.0 * x[0], 2.0 * (x[1] - a), -2.0 * b * x[2]);
          case 1: return g3(a, 2.0 * b * x[1], 1.0);
          default: {
            const double r = x[2] - b * x[0];
            return g3(2.0 * a * x[0] - 50.0 * b * r, 12.0 * x[1], 50.0 * r);
          }
        }
      }));

  r.push_back(make(
      "tp8", 3, 2, {g2(2, 3), g2(4, 5), g2(2, 0)}, g2(-1, -1), g2(5, 2),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        switch (j) {
          case 0: return x[0] * x[0] + a * std::pow(x[1], 4) + a * b * x[0] * x[1];
          case 1: return 5.0 * x[0] * x[0] + a * x[1] * x[1] + b * std::pow(x[0], 4) * x[1];
          default: return std::exp(-a * x[0] + b * x[1]) + x[0] * x[0] - a * x[1] * x[1];
        }
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        switch (j) {
          case 0: return g2(2.0 * x[0] + a * b * x[1], 4.0 * a * std::pow(x[1], 3) + a * b * x[0]);
          case 1:
            return g2(10.0 * x[0] + 4.0 * b * std::pow(x[0], 3) * x[1],
                      2.0 * a * x[1] + b * std::pow(x[0], 4));
          default: {
            const double e = std::exp(-a * x[0] + b * x[1]);
            return g2(-a * e + 2.0 * x[0], b * e - 2.0 * a * x[1]);
          }
        }
      },
      "scenario vector read as (w_1, w_2) of scenario i"));

  r.push_back(rosenbrock_triple("tp9", {g2(2, 3), g2(1, 2), g2(4, 5)}, g2(-1, -1), g2(0, 0)));

  r.push_back(make(
      "tp10", 2, 2, {g3(1, 2, 2), g3(1, 3, 0)}, g2(-2, -2), g2(5, 5),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1], c = w[2];
        if (j == 0) return a * x[0] * x[0] + b * x[1] * x[1] + a * x[0] + a * c * x[1];
        const double u = 1.0 + a * x[0] + b * x[1];
        return std::pow(a + b * x[1], 2) + a * x[0] + x[1] + 10.0 * (x[0] + c * x[1]) +
               std::exp(u * u);
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1], c = w[2];
        if (j == 0) return g2(2.0 * a * x[0] + a, 2.0 * b * x[1] + a * c);
        const double u = 1.0 + a * x[0] + b * x[1];
        const double e = 2.0 * u * std::exp(u * u);
        return g2(a + 10.0 + a * e, 2.0 * b * (a + b * x[1]) + 1.0 + 10.0 * c + b * e);
      }));

  r.push_back(make(
      "tp11", 2, 2, {g2(1, 2), g2(2, 3)}, g2(-6, -6), g2(6, 4),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        if (j == 0) return 0.25 * std::pow(x[0] - a, 4) + 2.0 * std::pow(x[1] - b, 4);
        return std::pow(a * x[1] - b * x[0] * x[0], 2) + std::pow(1.0 - a * x[0], 2);
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        if (j == 0) return g2(std::pow(x[0] - a, 3), 8.0 * std::pow(x[1] - b, 3));
        const double r = a * x[1] - b * x[0] * x[0];
        return g2(-4.0 * b * x[0] * r - 2.0 * a * (1.0 - a * x[0]), 2.0 * a * r);
      },
      "scenario vector read as (w_1, w_2) of scenario i"));

  r.push_back(concave_pair("tp12", -3, 8, 100));
  r.push_back(shifted_quadratics("tp13", {g2(1, 1), g2(0, 2)}, g2(0, 0), g2(1, 1)));
  r.push_back(rosenbrock_triple("tp14", {g2(4, 1), g2(5, 2), g2(6, 4)}, g2(1, 1), g2(3, 3)));
  r.push_back(tp15());
  r.push_back(tp16());

  r.push_back(make(
      "tp17", 2, 2, {g2(50, 4), g2(101, 3)}, g2(-4, -4), g2(5, 5),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        if (j == 0) return a * x[0] * x[0] + (b + a) * x[1] + a * b * x[0] * x[1] + 3.0;
        return a * x[0] * x[0] + b * x[1] * x[1] + (x[0] + x[1]) * a * b + 4.0;
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1];
        if (j == 0) return g2(2.0 * a * x[0] + a * b * x[1], b + a + a * b * x[0]);
        return g2(2.0 * a * x[0] + a * b, 2.0 * b * x[1] + a * b);
      }));

  r.push_back(make(
      "tp18", 2, 1, {g1(-9), g1(58)}, g1(-6), g1(6),
      [](const Vector& x, int j, const Vector& w) {
        const double t = x[0], o = w[0];
        return j == 0 ? -o * t * t + 57.0 * t + 1.0 : -o * t * t - 25.0 * t + 4.0;
      },
      [](const Vector& x, int j, const Vector& w) {
        const double t = x[0], o = w[0];
        return g1(j == 0 ? -2.0 * o * t + 57.0 : -2.0 * o * t - 25.0);
      }));

  r.push_back(make(
      "tp19", 3, 3, {g3(76, 4, 4), g3(0, 9, 6), g3(4, 6, 1)}, g3(1, -2, 0), g3(3.5, 2, 1),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1], c = w[2];
        switch (j) {
          case 0:
            return (a + b) * x[0] * x[0] + std::pow(x[0], 4) * x[1] * (a + c) + x[2] * a * b + 1.0;
          case 1: return a * c * (x[0] * x[0] + 2.0 * x[1] * x[1]) + (a + c) * x[0] * x[0] * x[1] + 3.0;
          default:
            return a * std::pow(x[0], 3) + b * x[1] * x[1] + (a + b + c) * x[0] * x[1] * x[2] + 6.0;
        }
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1], c = w[2];
        switch (j) {
          case 0:
            return g3(2.0 * (a + b) * x[0] + 4.0 * std::pow(x[0], 3) * x[1] * (a + c),
                      std::pow(x[0], 4) * (a + c), a * b);
          case 1:
            return g3(2.0 * a * c * x[0] + 2.0 * (a + c) * x[0] * x[1],
                      4.0 * a * c * x[1] + (a + c) * x[0] * x[0], 0.0);
          default: {
            const double s = a + b + c;
            return g3(3.0 * a * x[0] * x[0] + s * x[1] * x[2], 2.0 * b * x[1] + s * x[0] * x[2],
                      s * x[0] * x[1]);
          }
        }
      }));

  r.push_back(make(
      "tp20", 3, 3, {g3(1, 0, 90), g3(9, 17, 6), g3(8, 2, 1)}, g3(-1, -2, -1), g3(4, 5, 3.4),
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1], c = w[2], abc = a * b * c;
        switch (j) {
          case 0: return abc * x[0] * x[0] + std::pow(x[2], 4) * (a + b) + x[0] * x[1] * abc + abc;
          case 1:
            return std::pow(x[0], 3) + (x[1] * x[1] + x[2] * x[2]) * a * b +
                   a * b * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) + a * b;
          default: return x[0] * x[0] + x[1] * x[1] + (a + b + c) * x[0] * x[1] + a + 1.0;
        }
      },
      [](const Vector& x, int j, const Vector& w) {
        const double a = w[0], b = w[1], c = w[2], abc = a * b * c;
        switch (j) {
          case 0:
            return g3(2.0 * abc * x[0] + abc * x[1], abc * x[0], 4.0 * std::pow(x[2], 3) * (a + b));
          case 1:
            return g3(3.0 * x[0] * x[0] + 2.0 * a * b * x[0], 4.0 * a * b * x[1], 4.0 * a * b * x[2]);
          default: {
            const double s = a + b + c;
            return g3(2.0 * x[0] + s * x[1], 2.0 * x[1] + s * x[0], 0.0);
          }
        }
      }));

  return r;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = make_registry();
  return r;
}

const Entry& find(std::string_view id) {
  for (const auto& e : registry())
    if (e.spec.id == id) return e;
  throw std::invalid_argument("unknown problem id: " + std::string(id));
}

}  // namespace

UncertainProblem build(std::string_view id) {
  const Entry& e = find(id);
  UncertainProblem p;
  p.name = e.spec.id;
  p.n = e.spec.n;
  p.m = e.spec.m;
  p.p = e.spec.p;
  p.scenarios = e.scenarios;
  p.lower_bound = e.spec.lower_bound;
  p.upper_bound = e.spec.upper_bound;
  p.value_fn = [scen = e.scenarios, f = e.value](const Vector& x, int j, int i) {
    return f(x, j, scen[static_cast<std::size_t>(i)]);
  };
  p.gradient_fn = [scen = e.scenarios, g = e.grad](const Vector& x, int j, int i) {
    return g(x, j, scen[static_cast<std::size_t>(i)]);
  };
  p.validate();
  return p;
}

std::vector<ProblemSpec> list_problems() {
  std::vector<ProblemSpec> out;
  for (const auto& e : registry()) out.push_back(e.spec);
  return out;
}

bool has_problem(std::string_view id) {
  for (const auto& e : registry())
    if (e.spec.id == id) return true;
  return false;
}

std::vector<std::string> profile_suite_ids() {
  std::vector<std::string> ids;
  for (int k = 1; k <= 20; ++k) ids.push_back("tp" + std::to_string(k));
  return ids;
}

}  // namespace rncg::suite
