#pragma once

// Registry of the built-in test problems: "tp1" ... "tp20" and "tp1-ex", the
// variant of tp1 whose second objective is h_2(x, w) = -x^2 - w x.

#include <string>
#include <string_view>
#include <vector>

#include "rncg/problem.hpp"

namespace rncg::suite {

struct ProblemSpec {
  std::string id;
  int m = 0;
  int n = 0;
  int p = 0;
  Vector lower_bound;
  Vector upper_bound;
  std::string note;  // reading adopted where the formula is ambiguous
};

/// Throws std::invalid_argument for an unknown id.
UncertainProblem build(std::string_view id);

/// All 21 entries in registry order (tp1, tp1-ex, tp2, ..., tp20).
std::vector<ProblemSpec> list_problems();

bool has_problem(std::string_view id);

/// tp1 ... tp20 (no tp1-ex), the set the profiles run over.
std::vector<std::string> profile_suite_ids();

}  // namespace rncg::suite
