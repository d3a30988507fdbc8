#include "mucalc/transforms.hpp"

#include <functional>

#include "mucalc/fragment.hpp"

namespace mucalc {

std::string boxed_name(const Formula& f, const std::string& x) {
  auto used = all_names(f);
  std::string cand = x + "#b";
  for (int i = 2; used.count(cand); ++i) cand = x + "#b" + std::to_string(i);
  return cand;
}

static void require_unbound(const Formula& f, const std::string& x,
                            const char* op) {
  if (bound_vars(f).count(x))
    throw Error(std::string(op) + ": variable '" + x + "' is bound in the formula");
}

Formula lift(const Formula& f, const std::string& x, const std::string& x_bar) {
  require_unbound(f, x, "lift");
  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case Kind::Var:
      case Kind::NegVar:
      case Kind::Top:
      case Kind::Bot:
        return g;
      case Kind::And:
        return Formula::conj(rec(g.left()), rec(g.right()));
      case Kind::Or:
        return Formula::disj(rec(g.left()), rec(g.right()));
      case Kind::Dia:
        return Formula::dia(g.name(), rec(g.body()));
      case Kind::Box:
        // every occurrence under the box is boxed: plain renaming, no
        // recursive lift
        return Formula::box(g.name(),
                            apply_subst(g.body(), Substitution::single(
                                                      x, Formula::var(x_bar))));
      case Kind::Mu:
        return Formula::mu(g.name(), rec(g.body()));
      case Kind::Nu:
        return Formula::nu(g.name(), rec(g.body()));
    }
    return g;
  };
  return rec(f);
}

Formula lift(const Formula& f, const std::string& x) {
  return lift(f, x, boxed_name(f, x));
}

Formula flatten(const Formula& f, const std::string& x) {
  std::string xb = boxed_name(f, x);
  return apply_subst(lift(f, x, xb), Substitution::single(xb, Formula::bot()));
}

static Formula boxing_rec(const Formula& f, std::set<std::string> X) {
  if (is_almost_good(f, X)) return f;
  switch (f.kind()) {
    case Kind::And:
      return Formula::conj(boxing_rec(f.left(), X), boxing_rec(f.right(), X));
    case Kind::Or:
      return Formula::disj(boxing_rec(f.left(), X), boxing_rec(f.right(), X));
    case Kind::Dia:
      return Formula::dia(f.name(), boxing_rec(f.body(), X));
    case Kind::Mu:
    case Kind::Nu: {
      const std::string& z = f.name();
      std::set<std::string> Xz = X;
      Xz.insert(z);
      Formula inner = boxing_rec(f.body(), Xz);
      std::string zb = boxed_name(inner, z);
      Formula psi2 = lift(inner, z, zb);
      Formula psi0 = f.kind() == Kind::Mu ? Formula::mu(z, psi2)
                                          : Formula::nu(z, psi2);
      Formula psi1 = f.kind() == Kind::Mu ? Formula::mu(zb, psi0)
                                          : Formula::nu(zb, psi0);
      return apply_subst(psi0, Substitution::single(zb, psi1));
    }
    default:
      // a box or leaf root makes every occurrence boxed, hence almost-good
      throw Error("boxing: unreachable case");
  }
}

Formula boxing(const Formula& f, const std::set<std::string>& X) {
  for (auto& x : X)
    if (bound_vars(f).count(x))
      throw Error("boxing: variable '" + x + "' from X is bound in the formula");
  // the recursion tracks bound variables through X, so binder names must be
  // unambiguous
  Formula g = is_well_named(f) ? f : make_well_named(f);
  return boxing_rec(g, X);
}

Formula continuity_normal_form(const Formula& f, const std::string& x) {
  require_unbound(f, x, "continuity_normal_form");
  if (!is_positive_in(f, x))
    throw Error("continuity_normal_form: '" + x + "' must occur positively");
  return flatten(make_well_named(boxing(f, {x})), x);
}

// --- translation ----------------------------------------------------------------

static void check_scheme(const TranslationScheme& s) {
  for (auto& [b, psi] : s.psi) {
    auto fv = free_vars(psi);
    for (auto& v : fv)
      if (v != s.p && v != s.q)
        throw Error("scheme formula for action '" + b +
                    "' has stray free variable '" + v + "'");
    // q is the plug position and must stay monotone; p may occur mixed
    // (the layered simulation schemes use ~p to step outside the image)
    if (!is_positive_in(psi, s.q))
      throw Error("scheme formula for action '" + b + "' must be positive in q");
  }
}

TranslationScheme submodel_scheme(const std::set<std::string>& actions,
                                  const std::string& p, const std::string& q) {
  TranslationScheme s;
  s.p = p;
  s.q = q;
  for (auto& a : actions)
    s.psi[a] = Formula::conj(
        Formula::var(p),
        Formula::dia(a, Formula::conj(Formula::var(p), Formula::var(q))));
  return s;
}

TranslationScheme referee_scheme() {
  TranslationScheme s;
  Formula p = Formula::var("p"), q = Formula::var("q");
  Formula np = Formula::neg_var("p");
  Formula hop = Formula::dia("a", Formula::conj(p, q));
  s.psi["h"] = Formula::conj(p, hop);
  s.psi["v"] = Formula::conj(p, Formula::dia("a", Formula::conj(np, hop)));
  return s;
}

TranslationScheme thomason_scheme() {
  TranslationScheme s;
  Formula p = Formula::var("p"), q = Formula::var("q");
  Formula np = Formula::neg_var("p");
  Formula hop = Formula::dia("a", Formula::conj(p, q));
  s.psi["h"] = Formula::conj(p, hop);
  s.psi["v"] = Formula::conj(
      p, Formula::dia("a", Formula::conj(
                              np, Formula::dia("a", Formula::conj(np, hop)))));
  return s;
}

Formula translate(const Formula& f, const TranslationScheme& scheme,
                  const std::set<std::string>& transparent) {
  check_scheme(scheme);
  if (all_names(f).count(scheme.p))
    throw Error("translate: designated variable '" + scheme.p +
                "' already occurs in the formula");
  Formula p = Formula::var(scheme.p);
  std::function<Formula(const Formula&)> tr = [&](const Formula& g) -> Formula {
    switch (g.kind()) {
      case Kind::Var:
      case Kind::NegVar:
        if (transparent.count(g.name())) return g;
        return Formula::conj(p, g);
      case Kind::Top:
        return p;
      case Kind::Bot:
        return Formula::bot();
      case Kind::And:
        return Formula::conj(tr(g.left()), tr(g.right()));
      case Kind::Or:
        return Formula::disj(tr(g.left()), tr(g.right()));
      case Kind::Dia: {
        auto it = scheme.psi.find(g.name());
        if (it == scheme.psi.end())
          throw Error("translate: action '" + g.name() + "' not in the scheme");
        return apply_subst(it->second, Substitution::single(scheme.q, tr(g.body())));
      }
      case Kind::Box: {
        auto it = scheme.psi.find(g.name());
        if (it == scheme.psi.end())
          throw Error("translate: action '" + g.name() + "' not in the scheme");
        // psi_b^op: NNF negation of psi_b[~q/q]
        Formula op = dualize(apply_subst(
            it->second, Substitution::single(scheme.q, Formula::neg_var(scheme.q))));
        return Formula::conj(
            p, apply_subst(op, Substitution::single(scheme.q, tr(g.body()))));
      }
      case Kind::Mu:
        return Formula::mu(g.name(), tr(g.body()));
      case Kind::Nu:
        return Formula::nu(g.name(), tr(g.body()));
    }
    return g;
  };
  return tr(f);
}

Formula thomason_translate(const Formula& f) {
  TranslationScheme s = thomason_scheme();
  Formula tr = translate(f, s);
  Formula probe = Formula::dia("a", Formula::box("a", Formula::bot()));
  return literal_subst(tr, s.p, probe, dualize(probe));
}

Formula master_box(const Formula& chi, const std::set<std::string>& actions) {
  auto used = all_names(chi);
  std::string z = fresh_name("z", used);
  Formula body = chi;
  for (auto& a : actions)
    body = Formula::conj(body, Formula::box(a, Formula::var(z)));
  return Formula::nu(z, body);
}

// --- ordinal sum -----------------------------------------------------------------

static std::set<std::string> actions_of(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (is_modal(g.kind())) out.insert(g.name());
    if (g.node()->lhs) rec(g.left());
    if (g.node()->rhs) rec(g.right());
  };
  rec(f);
  return out;
}

SumFormulas sum_formula(const Formula& phi0, const Formula& phi1,
                        const std::string& p, const std::string& x) {
  std::set<std::string> acts = actions_of(phi0);
  for (auto& a : actions_of(phi1)) acts.insert(a);
  if (acts.size() > 1)
    throw Error("sum_formula: inputs must be monomodal over a single action");
  std::string a = acts.empty() ? "a" : *acts.begin();
  for (const Formula* f : {&phi0, &phi1}) {
    if (all_names(*f).count(p))
      throw Error("sum_formula: '" + p + "' must be fresh for the inputs");
    if (!is_positive_in(*f, x) || bound_vars(*f).count(x))
      throw Error("sum_formula: '" + x + "' must be positive and not bound");
  }
  std::set<std::string> used = all_names(phi0);
  for (auto& n : all_names(phi1)) used.insert(n);
  used.insert(p);
  used.insert(x);
  std::string z = fresh_name("z", used);
  used.insert(z);
  std::string q = fresh_name("q", used);

  Formula vp = Formula::var(p), nvp = Formula::neg_var(p);
  TranslationScheme scheme = submodel_scheme({a}, p, q);

  auto at = [&](const Formula& body, const Formula& arg) {
    return apply_subst(body, Substitution::single(x, arg));
  };
  // chi0 = p \/ ([]~p /\ mu z.phi0(z))
  Formula chi0 = Formula::disj(
      vp, Formula::conj(Formula::box(a, nvp),
                        Formula::mu(z, at(phi0, Formula::var(z)))));
  // chi1 = ~p \/ mu z. tr(phi1(z))
  Formula chi1 = Formula::disj(
      nvp, Formula::mu(z, translate(at(phi1, Formula::var(z)), scheme)));
  Formula chi = Formula::conj(chi0, chi1);
  // psi(x) = (~p /\ phi0(x)) \/ (tr_p(phi1)(x) /\ [](p \/ x)); the iteration
  // variable x stays untranslated inside tr
  Formula trp1 = translate(phi1, scheme, {x});
  Formula psi = Formula::disj(
      Formula::conj(nvp, phi0),
      Formula::conj(trp1,
                    Formula::box(a, Formula::disj(vp, Formula::var(x)))));
  Formula Psi = Formula::conj(master_box(chi, {a}), psi);
  return SumFormulas{chi, psi, Psi};
}

Formula totalize(const Formula& psi, const std::string& x) {
  if (!is_positive_in(psi, x))
    throw Error("totalize: '" + x + "' must occur positively");
  // bind a renamed copy of x so the output keeps x free-only (the textbook
  // display mu x.psi would make x simultaneously free and bound)
  std::string x2 = fresh_name(x, all_names(psi));
  Formula lfp =
      Formula::mu(x2, apply_subst(psi, Substitution::single(
                                           x, Formula::var(x2))));
  return Formula::disj(
      dualize(lfp),
      apply_subst(psi, Substitution::single(
                           x, Formula::conj(Formula::var(x), lfp))));
}

// --- symbolic ordinals -------------------------------------------------------------

static void ord_atoms(const OrdinalExpr& e, std::vector<OrdinalExpr::K>& out) {
  switch (e.k) {
    case OrdinalExpr::K::Zero:
      return;
    case OrdinalExpr::K::Plus:
      ord_atoms(*e.lhs, out);
      ord_atoms(*e.rhs, out);
      return;
    default:
      out.push_back(e.k);
  }
}

OrdinalExpr ord_normalize(const OrdinalExpr& e) {
  using K = OrdinalExpr::K;
  std::vector<K> atoms;
  ord_atoms(e, atoms);
  // right-to-left absorption: a countable atom vanishes into a following
  // omega/omega1 (1 + w = w, countable + w1 = w1)
  std::vector<K> keep;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    K head = keep.empty() ? K::Zero : keep.back();
    bool absorbed = (head == K::Omega && *it == K::One) ||
                    (head == K::Omega1 && (*it == K::One || *it == K::Omega));
    if (!absorbed) keep.push_back(*it);
  }
  if (keep.empty()) return OrdinalExpr::zero();
  OrdinalExpr acc{keep.back(), nullptr, nullptr};
  for (auto it = keep.rbegin() + 1; it != keep.rend(); ++it)
    acc = OrdinalExpr::plus(acc, OrdinalExpr{*it, nullptr, nullptr});
  return acc;
}

std::string ord_to_string(const OrdinalExpr& e) {
  switch (e.k) {
    case OrdinalExpr::K::Zero: return "0";
    case OrdinalExpr::K::One: return "1";
    case OrdinalExpr::K::Omega: return "w";
    case OrdinalExpr::K::Omega1: return "w1";
    case OrdinalExpr::K::Plus:
      return ord_to_string(*e.lhs) + " + " + ord_to_string(*e.rhs);
  }
  return "?";
}

bool ord_equal(const OrdinalExpr& a, const OrdinalExpr& b) {
  return ord_to_string(ord_normalize(a)) == ord_to_string(ord_normalize(b));
}

}  // namespace mucalc
