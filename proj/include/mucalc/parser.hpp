#pragma once

#include "mucalc/formula.hpp"

namespace mucalc {

// Concrete syntax:
//   true false /\ \/ ~ <a> [a] mu z. nu z.
// Identifiers match [A-Za-z][A-Za-z0-9_]*.  /\ binds tighter than \/ and
// modalities bind tighter than both; fixpoint binders extend as far to the
// right as possible.  `~` on a non-variable is accepted and macro-expanded
// through dualize (reported via expanded_negation).

struct ParseResult {
  Formula formula;
  bool expanded_negation = false;  // a general ~phi was rewritten to NNF
};

struct ParseOptions {
  // Accept identifiers carrying the reserved "#b" marker produced by the
  // lift/boxing transforms.  User-facing entry points keep this off.
  bool allow_reserved = false;
};

ParseResult parse_formula(const std::string& text, const ParseOptions& opts = {});

// Convenience wrapper discarding the negation-expansion flag.
Formula parse(const std::string& text, const ParseOptions& opts = {});

std::string print(const Formula& f);

}  // namespace mucalc
