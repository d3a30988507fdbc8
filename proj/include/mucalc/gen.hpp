#pragma once

#include <random>

#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"

namespace mucalc {

// Seeded random formulas for property tests.  Binder variables are always
// fresh and used positively, so outputs are well-named by construction.
struct FormulaGenOptions {
  int max_depth = 5;
  std::vector<std::string> actions = {"a"};
  std::vector<std::string> vars = {"x", "y"};
  // vars never placed under ~ (monotonicity-sensitive tests)
  std::set<std::string> positive_only;
  bool allow_binders = true;
};

Formula random_formula(std::mt19937_64& rng, const FormulaGenOptions& opts);

KripkeModel random_model(std::mt19937_64& rng, int num_states,
                         const std::vector<std::string>& actions,
                         const std::vector<std::string>& props);

}  // namespace mucalc
