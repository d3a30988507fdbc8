#pragma once

#include <cstdint>
#include <iosfwd>

#include "mucalc/formula.hpp"

namespace mucalc {

// State sets are bitmasks; models are capped at 64 states, which is ample at
// desk scale (enumeration stops far earlier, constructions stay tiny).
using StateSet = std::uint64_t;

class KripkeModel {
 public:
  KripkeModel() = default;
  KripkeModel(std::vector<std::string> states, std::vector<std::string> actions);

  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& actions() const { return actions_; }
  std::set<std::string> action_set() const;
  const std::map<std::string, StateSet>& valuation() const { return val_; }

  int state_index(const std::string& id) const;  // throws on unknown id
  StateSet full() const {
    return num_states() == 64 ? ~StateSet{0}
                              : ((StateSet{1} << num_states()) - 1);
  }

  bool has_action(const std::string& a) const;
  void add_edge(const std::string& a, const std::string& from, const std::string& to);
  void add_edge(const std::string& a, int from, int to);
  bool has_edge(const std::string& a, int from, int to) const;
  // successors of `from` under action a, as a bitmask
  StateSet succ(const std::string& a, int from) const;
  const std::vector<StateSet>& relation(const std::string& a) const;

  void set_valuation(const std::string& prop, StateSet s);
  bool has_prop(const std::string& prop) const { return val_.count(prop) != 0; }
  StateSet prop(const std::string& prop) const;  // throws on unknown prop

 private:
  std::vector<std::string> states_;
  std::map<std::string, int> index_;
  std::vector<std::string> actions_;
  std::map<std::string, std::vector<StateSet>> rel_;  // action -> succ mask/state
  std::map<std::string, StateSet> val_;
};

std::vector<std::string> states_of(const KripkeModel& m, StateSet s);

// --- text format -------------------------------------------------------------
// states: s0 s1 s2
// rel a: s0->s1, s1->s2
// val p: s2
// '#' starts a comment.  Actions/props with no line are allowed only if the
// model never mentions them.
KripkeModel parse_model(const std::string& text);
std::string print_model(const KripkeModel& m);

// --- evaluation ----------------------------------------------------------------

// Tarski semantics; mu iterates up from the empty set, nu down from the full
// set.  Free variables must be valued, actions must exist in the model.
StateSet eval(const KripkeModel& m, const Formula& f);
bool eval_at(const KripkeModel& m, const std::string& state, const Formula& f);

// Approximant trace of f as a function of x: empty set, f(empty), ... until
// two consecutive entries agree (both kept).
std::vector<StateSet> approximants(const KripkeModel& m, const Formula& f,
                                   const std::string& x);

// Stabilization index of the trace (trace length - 2).
int closure_ordinal_on(const KripkeModel& m, const Formula& f, const std::string& x);

// --- relations between models -----------------------------------------------------

bool bisimilar(const KripkeModel& m1, const std::string& s1,
               const KripkeModel& m2, const std::string& s2,
               const std::set<std::string>& props,
               const std::set<std::string>& actions);

KripkeModel induced_submodel(const KripkeModel& m, StateSet s);
// States of m1 become "l:<id>", of m2 "r:<id>".
KripkeModel disjoint_union(const KripkeModel& m1, const KripkeModel& m2);
KripkeModel variant(const KripkeModel& m, const std::string& x, StateSet s);

// S closed under every relation (no edge leaves S).
bool is_closed(const KripkeModel& m, StateSet s);

// --- constructors -------------------------------------------------------------------

// Monomodal simulation of a bimodal model over {h,v}: states (s,h) and (s,v)
// plus a pit; action "a".  Returns the model and the h-side embedding.
struct ThomasonModel {
  KripkeModel model;
  std::map<std::string, std::string> embedding;  // original id -> "<id>.h"
};
ThomasonModel thomason_model(const KripkeModel& m);

// Carrier of both models, edges of both plus all edges from m_beta states to
// m_alpha states; v(p) = the m_beta states.
KripkeModel sum_witness_model(const KripkeModel& m_alpha, const KripkeModel& m_beta,
                              const std::string& p);

// Finite truncation of the ordinal staircase: states 0..n-1, h-self-loops
// everywhere, v-edges k+1 -> k.
KripkeModel ordinal_chain_model(int n);

// s0 -> s1 -> ... -> s_{n-1} over action "a", p only at the last state.
KripkeModel chain_model(int n, const std::string& p);

// Every state satisfies chi through the master modality.
bool is_acceptable(const KripkeModel& m, const Formula& chi);

}  // namespace mucalc
