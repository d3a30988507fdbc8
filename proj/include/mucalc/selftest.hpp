#pragma once

#include <iosfwd>

#include "mucalc/formula.hpp"

namespace mucalc::acceptance {

// Runs the full acceptance suite (deterministic for a fixed seed), printing
// one PASS/FAIL line per criterion.  Returns true when everything passed.
bool run_all(std::ostream& out, std::uint64_t seed);

}  // namespace mucalc::acceptance
