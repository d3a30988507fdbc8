#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mucalc {

// Generic error for user-facing failures (bad input, contract violations).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Kind {
  Var,     // positive propositional variable
  NegVar,  // negated propositional variable (NNF: negation only here)
  Top,
  Bot,
  And,
  Or,
  Dia,  // <a> body
  Box,  // [a] body
  Mu,   // mu z. body
  Nu,   // nu z. body
};

// Immutable formula AST with shared structure.  Negation normal form by
// construction: mu/nu factories reject bodies where the bound variable
// occurs under NegVar.
class Formula {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    std::string name;  // variable (Var/NegVar/Mu/Nu) or action (Dia/Box)
    NodePtr lhs;
    NodePtr rhs;
  };

  Formula() = default;  // empty; only as a placeholder before assignment
  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static Formula var(const std::string& name);
  static Formula neg_var(const std::string& name);
  static Formula top();
  static Formula bot();
  static Formula conj(const Formula& l, const Formula& r);
  static Formula disj(const Formula& l, const Formula& r);
  static Formula dia(const std::string& action, const Formula& body);
  static Formula box(const std::string& action, const Formula& body);
  static Formula mu(const std::string& var, const Formula& body);
  static Formula nu(const std::string& var, const Formula& body);

  bool empty() const { return node_ == nullptr; }
  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  Formula body() const { return Formula(node_->lhs); }
  const NodePtr& node() const { return node_; }

  std::size_t size() const;  // number of AST nodes

  // Exact syntactic comparison.
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  // Unique string key for exact syntax; alpha_key canonicalises bound
  // variable names (de Bruijn style) so alpha-equivalent formulas agree.
  std::string key() const;
  std::string alpha_key() const;

 private:
  NodePtr node_;
};

bool is_binder(Kind k);
bool is_modal(Kind k);
bool is_binary(Kind k);
bool is_leaf(Kind k);

// --- binding structure -----------------------------------------------------

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> bound_vars(const Formula& f);
// Every variable and action name occurring anywhere (for freshness).
std::set<std::string> all_names(const Formula& f);
bool is_positive_in(const Formula& f, const std::string& x);

// Deterministic fresh name: base, base1, base2, ... first not in `used`.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

// Whether a formula is well-named: no bound variable is also free, and each
// bound variable has a unique binding subformula occurrence.
bool is_well_named(const Formula& f);

// Alpha-equivalent variant where every binder gets a distinct name that is
// not free in the formula.  Already well-named formulas come back unchanged.
Formula make_well_named(const Formula& f);

// --- substitution ----------------------------------------------------------

// Ordered finite map var -> formula, applied simultaneously.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::vector<std::pair<std::string, Formula>> items);
  static Substitution single(const std::string& var, const Formula& f);

  const std::vector<std::pair<std::string, Formula>>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  const Formula* lookup(const std::string& var) const;
  std::set<std::string> domain() const;

 private:
  std::vector<std::pair<std::string, Formula>> items_;
};

// Capture-avoiding simultaneous substitution; bound variables of `f` are
// renamed (deterministically) when a range formula would be captured.
Formula apply_subst(const Formula& f, const Substitution& s);

// sigma1 . sigma2 per the composite-substitution display: each range formula
// of sigma1 gets sigma2 applied, the domain of sigma1 is kept.
Substitution compose_subst(const Substitution& s1, const Substitution& s2);

// Replace positive occurrences of `var` by pos and negated ones by neg.
// Used when substituting into mixed-polarity positions (e.g. p -> <>[]false).
Formula literal_subst(const Formula& f, const std::string& var,
                      const Formula& pos, const Formula& neg);

// --- occurrences -----------------------------------------------------------

// Path of child indices (0 = left/body, 1 = right) from the root.
using OccAddress = std::vector<int>;

Formula subformula_at(const Formula& f, const OccAddress& occ);

// Addresses of all occurrences of variable `x` (Var or NegVar leaves),
// pre-order.  free_only restricts to occurrences not bound in `f`.
std::vector<OccAddress> occurrences_of(const Formula& f, const std::string& x,
                                       bool free_only);

// --- standard contexts and closure ----------------------------------------

// The chain [Q^n_{z_n}.psi_n / z_n] ... [Q^1_{z_1}.psi_1 / z_1] of singleton
// substitutions reinstalling the fixpoint bindings of `f` around the
// subformula at `occ` (inner binders first).
std::vector<std::pair<std::string, Formula>> standard_context_chain(
    const Formula& f, const OccAddress& occ);

// Same context as a single simultaneous substitution (each variable mapped
// to its fully expanded binding formula); applying it in one step agrees
// with applying the chain left to right.
Substitution standard_context(const Formula& f, const OccAddress& occ);

// CL(f) via standard contexts over the subformulas of a well-named f.
std::vector<Formula> closure(const Formula& f);

// CL(f) recomputed as the least set closed under root membership, binary and
// modal decomposition, and fixpoint unfolding.  Must coincide with closure().
std::vector<Formula> closure_by_rules(const Formula& f);

// --- dualization -----------------------------------------------------------

// NNF formula denoting the complement of f on every model: swaps and/or,
// top/bot, dia/box, mu/nu and flips free literals.  Binder-bound variables
// are exempt from literal flipping so binders stay positive.
Formula dualize(const Formula& f);

}  // namespace mucalc
