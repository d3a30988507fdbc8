#pragma once

#include <functional>
#include <optional>

#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"

namespace mucalc {

struct SearchBudget {
  int max_states = 4;
  int samples = 2000;           // random models per size beyond the exhaustive tier
  std::uint64_t seed = 1;
  int time_limit_ms = 30000;

  void validate() const {
    if (max_states < 1 || samples < 1 || time_limit_ms < 1)
      throw Error("search budget bounds must be >= 1");
  }
};

// Exhaustive, deterministically ordered enumeration of models up to
// max_states (capped at 3 plus a total-bit-width guard): sizes ascending,
// then relation bits (action-major, row-major), then valuation bits;
// isomorphic duplicates pruned via canonical labeling.  Returns false from
// the callback to stop early.
void enumerate_models(const std::set<std::string>& actions,
                      const std::set<std::string>& props, int max_states,
                      const std::function<bool(const KripkeModel&)>& fn);

// Upper bound of the exhaustive tier for the given signature.
int exhaustive_limit(const std::set<std::string>& actions,
                     const std::set<std::string>& props, int max_states);

struct DistinguishResult {
  std::optional<KripkeModel> model;
  std::string state;
  int exhausted_bound = 0;  // states fully enumerated without a witness
  bool timed_out = false;
};

// Search for a model and state where exactly one of f1, f2 holds.  Any hit is
// re-verified through both the denotational and the game backend.
DistinguishResult find_distinguishing_model(const Formula& f1, const Formula& f2,
                                            const SearchBudget& budget);

enum class VerdictKind {
  InC0,
  InC1,
  EquivalentToNormalFormUpToBound,
  NotContinuous,
  Exhausted,
};

struct Verdict {
  VerdictKind kind;
  Formula normal_form;  // set for every kind except InC0/InC1
  int bound = 0;        // exhaustively verified state-count bound
  std::optional<KripkeModel> witness;
  std::string witness_state;
};

const char* to_string(VerdictKind k);

// Syntactic shortcuts first (C0 then C), otherwise compare against the
// continuity normal form on small models.
Verdict check_continuity(const Formula& f, const std::string& x,
                         const SearchBudget& budget);

}  // namespace mucalc
