#pragma once

// Front generation, method comparison and profile runs behind the CLI.
// Results are assembled in (problem, solver, start index) order before any
// output is produced, so emitted bytes do not depend on the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rncg/batch.hpp"
#include "rncg/cg.hpp"
#include "rncg/metrics.hpp"
#include "rncg/problem.hpp"
#include "rncg/weighted_sum.hpp"

namespace rncg {

struct Manifest {
  std::vector<std::string> problems;
  SolverConfig ncg;
  SolverConfig weighted = weighted_default_config();
  int starts = 100;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_svg = true;
  Execution exec = Execution::Parallel;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct RunSummary {
  std::string source;
  std::string status;  // RunStatus name, or "error"
  Vector x;
  Vector F;
  std::int64_t iterations = 0;
  std::int64_t fun = 0;
  std::int64_t grad = 0;
  bool certified = false;  // independent certificate recomputation
  double certificate_norm = 0.0;
};

struct MethodFront {
  std::string solver_id;
  FrontArchive archive;  // certified, filtered
  std::vector<RunSummary> runs;
  std::int64_t iterations = 0;
  std::int64_t fun = 0;
  std::int64_t grad = 0;
  int failed = 0;

  /// #Fun + n * #Iter, summed over all runs.
  std::int64_t function_evaluations(int n) const { return fun + n * iterations; }
};

std::string ncg_solver_id(const SolverConfig& config);
inline constexpr const char* kWeightedSolverId = "weighted-sum";

MethodFront run_ncg_front(const UncertainProblem& problem, const Manifest& manifest);
MethodFront run_weighted_front(const UncertainProblem& problem, const Manifest& manifest);

struct MethodMetrics {
  std::optional<double> delta_spread;
  std::optional<double> hypervolume;
  int hv_excluded = 0;
  std::int64_t iterations = 0;
  std::int64_t function_evaluations = 0;
  std::size_t front_size = 0;
};

struct Comparison {
  std::string problem_id;
  int n = 0;
  int m = 0;
  std::vector<MethodFront> methods;  // ncg, weighted
  std::vector<MethodMetrics> metrics;
  std::optional<Extremes> extremes;
  std::optional<Vector> reference;
};

Comparison run_compare(const std::string& problem_id, const Manifest& manifest);

/// Fills extremes, reference and per-method metrics from methods.
void compute_metrics(Comparison& c);

struct ProfileKinds {
  ProfileTable iterations;
  ProfileTable function_evaluations;
  ProfileTable delta_spread;
  ProfileTable inverse_hypervolume;
};

inline constexpr double kSpreadFloor = 1e-12;

/// Cost tables from finished comparisons; missing metrics become failures.
ProfileKinds build_profiles(const std::vector<Comparison>& comparisons);

// Serialisation. All strings end with a newline and use LF only.
std::string front_csv(const MethodFront& front, int n, int m);
std::string runs_csv(const MethodFront& front, int m);
std::string comparison_json(const Comparison& c);
std::string profile_csv(const ProfileKinds& kinds);
std::string profile_json(const ProfileKinds& kinds, const std::vector<std::string>& skipped);
std::string front_svg(const std::string& title, const std::vector<const MethodFront*>& fronts, int m);
std::string profile_svg(const std::string& title, const ProfileTable& table);

}  // namespace rncg
