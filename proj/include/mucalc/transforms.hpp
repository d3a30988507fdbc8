#pragma once

#include "mucalc/formula.hpp"

namespace mucalc {

// --- lift / flatten / boxing -------------------------------------------------

// Deterministic reserved name for the boxed copy of `x`: "x#b", escalating to
// "x#b2", "x#b3", ... when already taken inside f.
std::string boxed_name(const Formula& f, const std::string& x);

// Rename to x-bar all boxed occurrences of x: homomorphic everywhere except
// lift([a]psi) = [a] psi[x_bar/x] (plain substitution under the box).
Formula lift(const Formula& f, const std::string& x);
Formula lift(const Formula& f, const std::string& x, const std::string& x_bar);

// flatten = lift then substitute bottom for the boxed copy.
Formula flatten(const Formula& f, const std::string& x);

// Equivalence-preserving rewrite eliminating very-bad occurrences of X
// variables by splitting fixpoint variables into boxed/unboxed copies.
Formula boxing(const Formula& f, const std::set<std::string>& X);

// flatten(make_well_named(boxing(f, {x})), x); lands in C(x).
Formula continuity_normal_form(const Formula& f, const std::string& x);

// --- p-definability translation ------------------------------------------------

// One defining formula per action, each over the two variables p ("inside
// the simulated structure") and q (plugged with the translated operand).
struct TranslationScheme {
  std::map<std::string, Formula> psi;  // action -> defining formula
  std::string p = "p";
  std::string q = "q";
};

TranslationScheme submodel_scheme(const std::set<std::string>& actions,
                                  const std::string& p = "p",
                                  const std::string& q = "q");
// Bimodal source {h,v}, monomodal target action "a".
TranslationScheme referee_scheme();
TranslationScheme thomason_scheme();

// tr(y)=p/\y, tr(true)=p, tr(<b>psi)=psi_b[tr(psi)/q],
// tr([b]psi)=p/\psi_b_op[tr(psi)/q] with psi_b_op the NNF of ~psi_b[~q/q].
// Variables in `transparent` translate to themselves instead of p/\y (used
// for the iteration variable of the ordinal-sum construction).
Formula translate(const Formula& f, const TranslationScheme& scheme,
                  const std::set<std::string>& transparent = {});

// translate with the Thomason scheme, then p replaced by <a>[a]false
// (negative occurrences by its dual [a]<a>true).
Formula thomason_translate(const Formula& f);

// nu z. (chi /\ [a1]z /\ ... /\ [ak]z): "chi holds at every reachable state".
Formula master_box(const Formula& chi, const std::set<std::string>& actions);

// --- ordinal-sum construction ----------------------------------------------------

struct SumFormulas {
  Formula chi;  // global side condition chi0 /\ chi1
  Formula psi;  // one-step sum map psi(x)
  Formula Psi;  // master_box(chi) /\ psi(x)
};

// phi0, phi1 monomodal with `x` positive and free; p fresh for both.
SumFormulas sum_formula(const Formula& phi0, const Formula& phi1,
                        const std::string& p, const std::string& x = "x");

// dualize(mu x.psi) \/ psi[x /\ mu x.psi / x]: least fixpoint is total on
// every model, per-model closure ordinal preserved whenever positive.
Formula totalize(const Formula& psi, const std::string& x);

// --- symbolic ordinals ------------------------------------------------------------

struct OrdinalExpr {
  enum class K { Zero, One, Omega, Omega1, Plus };
  K k = K::Zero;
  std::shared_ptr<const OrdinalExpr> lhs, rhs;  // for Plus

  static OrdinalExpr zero() { return {K::Zero, nullptr, nullptr}; }
  static OrdinalExpr one() { return {K::One, nullptr, nullptr}; }
  static OrdinalExpr omega() { return {K::Omega, nullptr, nullptr}; }
  static OrdinalExpr omega1() { return {K::Omega1, nullptr, nullptr}; }
  static OrdinalExpr plus(const OrdinalExpr& a, const OrdinalExpr& b) {
    return {K::Plus, std::make_shared<OrdinalExpr>(a),
            std::make_shared<OrdinalExpr>(b)};
  }
};

// Canonical form: associativity flattened, zeros dropped, 1+omega = omega,
// countable-left absorption into omega1.
OrdinalExpr ord_normalize(const OrdinalExpr& e);
std::string ord_to_string(const OrdinalExpr& e);
bool ord_equal(const OrdinalExpr& a, const OrdinalExpr& b);

}  // namespace mucalc
