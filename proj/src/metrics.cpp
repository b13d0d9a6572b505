#include "rncg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rncg/errors.hpp"

namespace rncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hv2(std::vector<std::pair<double, double>> pts, double r0, double r1) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double floor1 = r1;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].second >= floor1) continue;
    // Width runs to the next point that lowers the staircase, or to r0.
    double next = r0;
    for (std::size_t q = k + 1; q < pts.size(); ++q) {
      if (pts[q].second < pts[k].second) {
        next = pts[q].first;
        break;
      }
    }
    area += (next - pts[k].first) * (r1 - pts[k].second);
    floor1 = pts[k].second;
  }
  return area;
}

}  // namespace

bool dominates(const Vector& a, const Vector& b) {
  bool strict = false;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) return false;
    if (a[j] < b[j]) strict = true;
  }
  return strict;
}

std::vector<std::size_t> nondominated_filter(const std::vector<Vector>& points) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < points.size(); ++k) {
    bool drop = false;
    for (std::size_t q = 0; q < points.size() && !drop; ++q) {
      if (q == k) continue;
      drop = dominates(points[q], points[k]) || (q < k && points[q] == points[k]);
    }
    if (!drop) keep.push_back(k);
  }
  return keep;
}

std::vector<std::size_t> dedupe(const std::vector<Vector>& points, double tol) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < points.size(); ++k) {
    bool dup = false;
    for (std::size_t q : keep) {
      if ((points[q] - points[k]).cwiseAbs().maxCoeff() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(k);
  }
  return keep;
}

void FrontArchive::filter(double dedupe_tol) {
  std::vector<FrontPoint> finite;
  for (auto& p : points)
    if (p.F.allFinite()) finite.push_back(std::move(p));
  std::vector<Vector> fs;
  for (const auto& p : finite) fs.push_back(p.F);
  const auto unique = dedupe(fs, dedupe_tol);
  std::vector<Vector> ufs;
  for (auto k : unique) ufs.push_back(fs[k]);
  std::vector<FrontPoint> out;
  for (auto k : nondominated_filter(ufs)) out.push_back(std::move(finite[unique[k]]));
  points = std::move(out);
}

std::vector<Vector> FrontArchive::objective_vectors() const {
  std::vector<Vector> out;
  for (const auto& p : points) out.push_back(p.F);
  return out;
}

Extremes union_extremes(const std::vector<std::vector<Vector>>& fronts) {
  Extremes e;
  for (const auto& f : fronts) {
    for (const auto& p : f) {
      if (e.best.size() == 0) {
        e.best = p;
        e.worst = p;
      } else {
        e.best = e.best.cwiseMin(p);
        e.worst = e.worst.cwiseMax(p);
      }
    }
  }
  if (e.best.size() == 0) throw std::invalid_argument("no points to take extremes over");
  return e;
}

double delta_spread(const std::vector<Vector>& front, const Extremes& extremes) {
  const std::size_t N = front.size();
  if (N < 2) throw UndefinedMetric("spread needs at least two points");
  double result = -kInf;
  for (Eigen::Index j = 0; j < extremes.best.size(); ++j) {
    std::vector<double> v;
    for (const auto& p : front) v.push_back(p[j]);
    std::sort(v.begin(), v.end());
    const double d0 = std::abs(v.front() - extremes.best[j]);
    const double dN = std::abs(extremes.worst[j] - v.back());
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < N; ++i) gaps.push_back(v[i + 1] - v[i]);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    double dev = 0.0;
    for (double g : gaps) dev += std::abs(g - mean);
    const double den = d0 + dN + static_cast<double>(N - 1) * mean;
    if (!(den > 0.0)) throw UndefinedMetric("spread denominator is zero");
    result = std::max(result, (d0 + dN + dev) / den);
  }
  return result;
}

HypervolumeResult hypervolume(const std::vector<Vector>& front, const Vector& reference) {
  const auto m = reference.size();
  if (m != 2 && m != 3) throw std::invalid_argument("hypervolume supports m = 2 or 3");
  HypervolumeResult r;
  std::vector<Vector> pts;
  for (const auto& p : front) {
    if (p.size() != m) throw std::invalid_argument("front point has the wrong dimension");
    if (p.allFinite() && (p.array() < reference.array()).all())
      pts.push_back(p);
    else
      ++r.excluded;
  }
  if (pts.empty()) return r;

  if (m == 2) {
    std::vector<std::pair<double, double>> q;
    for (const auto& p : pts) q.emplace_back(p[0], p[1]);
    r.value = hv2(std::move(q), reference[0], reference[1]);
    return r;
  }

  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) { return a[2] < b[2]; });
  std::vector<std::pair<double, double>> slab;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    slab.emplace_back(pts[k][0], pts[k][1]);
    const double top = k + 1 < pts.size() ? pts[k + 1][2] : reference[2];
    const double depth = top - pts[k][2];
    if (depth > 0.0) r.value += depth * hv2(slab, reference[0], reference[1]);
  }
  return r;
}

Vector reference_point(const Extremes& extremes) {
  const Vector range = extremes.worst - extremes.best;
  return extremes.worst + (0.1 * range).cwiseMax(1e-6);
}

double ProfileTable::rho_at(std::size_t solver, double t) const {
  if (ratios.rows() == 0) return 0.0;
  int count = 0;
  for (Eigen::Index p = 0; p < ratios.rows(); ++p)
    if (ratios(p, static_cast<Eigen::Index>(solver)) <= t) ++count;
  return static_cast<double>(count) / static_cast<double>(ratios.rows());
}

ProfileTable performance_profile(const Matrix& costs, std::vector<std::string> solvers,
                                 std::vector<std::string> problems, int samples, double tau_cap) {
  if (static_cast<std::size_t>(costs.cols()) != solvers.size() ||
      static_cast<std::size_t>(costs.rows()) != problems.size())
    throw std::invalid_argument("cost matrix does not match solver/problem labels");
  if (samples < 2) throw std::invalid_argument("profile needs at least two tau samples");

  ProfileTable t;
  t.solvers = std::move(solvers);
  t.problems = std::move(problems);
  t.costs = costs;
  for (Eigen::Index p = 0; p < t.costs.rows(); ++p)
    for (Eigen::Index s = 0; s < t.costs.cols(); ++s)
      if (!std::isfinite(t.costs(p, s)) || !(t.costs(p, s) > 0.0)) t.costs(p, s) = kInf;

  t.ratios = Matrix::Constant(t.costs.rows(), t.costs.cols(), kInf);
  double max_ratio = 1.0;
  for (Eigen::Index p = 0; p < t.costs.rows(); ++p) {
    const double best = t.costs.row(p).minCoeff();
    if (!std::isfinite(best)) continue;
    for (Eigen::Index s = 0; s < t.costs.cols(); ++s) {
      const double c = t.costs(p, s);
      if (!std::isfinite(c)) continue;
      const double ratio = c == best ? 1.0 : c / best;
      t.ratios(p, s) = ratio;
      max_ratio = std::max(max_ratio, ratio);
    }
  }

  const double hi = std::min(max_ratio, tau_cap);
  if (hi <= 1.0) {
    t.tau = {1.0};
  } else {
    const double lhi = std::log(hi);
    for (int k = 0; k < samples; ++k)
      t.tau.push_back(std::exp(lhi * static_cast<double>(k) / (samples - 1)));
    t.tau.front() = 1.0;
    t.tau.back() = hi;
  }
  t.rho.resize(static_cast<Eigen::Index>(t.tau.size()), t.costs.cols());
  for (std::size_t k = 0; k < t.tau.size(); ++k)
    for (Eigen::Index s = 0; s < t.costs.cols(); ++s)
      t.rho(static_cast<Eigen::Index>(k), s) = t.rho_at(static_cast<std::size_t>(s), t.tau[k]);
  return t;
}

}  // namespace rncg
