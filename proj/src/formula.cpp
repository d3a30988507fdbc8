#include "mucalc/formula.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace mucalc {

bool is_binder(Kind k) { return k == Kind::Mu || k == Kind::Nu; }
bool is_modal(Kind k) { return k == Kind::Dia || k == Kind::Box; }
bool is_binary(Kind k) { return k == Kind::And || k == Kind::Or; }
bool is_leaf(Kind k) {
  return k == Kind::Var || k == Kind::NegVar || k == Kind::Top || k == Kind::Bot;
}

static Formula::NodePtr mk(Kind k, std::string name, Formula::NodePtr l,
                           Formula::NodePtr r) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->name = std::move(name);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

Formula Formula::var(const std::string& name) {
  return Formula(mk(Kind::Var, name, nullptr, nullptr));
}
Formula Formula::neg_var(const std::string& name) {
  return Formula(mk(Kind::NegVar, name, nullptr, nullptr));
}
Formula Formula::top() { return Formula(mk(Kind::Top, "", nullptr, nullptr)); }
Formula Formula::bot() { return Formula(mk(Kind::Bot, "", nullptr, nullptr)); }
Formula Formula::conj(const Formula& l, const Formula& r) {
  return Formula(mk(Kind::And, "", l.node(), r.node()));
}
Formula Formula::disj(const Formula& l, const Formula& r) {
  return Formula(mk(Kind::Or, "", l.node(), r.node()));
}
Formula Formula::dia(const std::string& action, const Formula& body) {
  return Formula(mk(Kind::Dia, action, body.node(), nullptr));
}
Formula Formula::box(const std::string& action, const Formula& body) {
  return Formula(mk(Kind::Box, action, body.node(), nullptr));
}

static void check_positive(const std::string& var, const Formula& body) {
  if (!is_positive_in(body, var))
    throw Error("positivity violation: variable '" + var +
                "' occurs negated under its binder");
}

Formula Formula::mu(const std::string& var, const Formula& body) {
  check_positive(var, body);
  return Formula(mk(Kind::Mu, var, body.node(), nullptr));
}
Formula Formula::nu(const std::string& var, const Formula& body) {
  check_positive(var, body);
  return Formula(mk(Kind::Nu, var, body.node(), nullptr));
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  if (node_->lhs) n += Formula(node_->lhs).size();
  if (node_->rhs) n += Formula(node_->rhs).size();
  return n;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->kind != o.node_->kind || node_->name != o.node_->name) return false;
  if (!!node_->lhs != !!o.node_->lhs || !!node_->rhs != !!o.node_->rhs) return false;
  if (node_->lhs && !(left() == o.left())) return false;
  if (node_->rhs && !(right() == o.right())) return false;
  return true;
}

static void key_rec(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Var: out += "v:" + f.name(); break;
    case Kind::NegVar: out += "n:" + f.name(); break;
    case Kind::Top: out += "T"; break;
    case Kind::Bot: out += "F"; break;
    case Kind::And:
      out += "(&";
      key_rec(f.left(), out);
      out += ",";
      key_rec(f.right(), out);
      out += ")";
      break;
    case Kind::Or:
      out += "(|";
      key_rec(f.left(), out);
      out += ",";
      key_rec(f.right(), out);
      out += ")";
      break;
    case Kind::Dia:
      out += "(<" + f.name() + ">";
      key_rec(f.body(), out);
      out += ")";
      break;
    case Kind::Box:
      out += "([" + f.name() + "]";
      key_rec(f.body(), out);
      out += ")";
      break;
    case Kind::Mu:
    case Kind::Nu:
      out += f.kind() == Kind::Mu ? "(u " : "(g ";
      out += f.name() + ".";
      key_rec(f.body(), out);
      out += ")";
      break;
  }
}

std::string Formula::key() const {
  std::string out;
  key_rec(*this, out);
  return out;
}

// de Bruijn style canonical key: bound variables replaced by binder depth.
static void alpha_rec(const Formula& f, std::vector<std::string>& env,
                      std::string& out) {
  auto lookup = [&](const std::string& name) -> int {
    for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
      if (env[static_cast<std::size_t>(i)] == name)
        return static_cast<int>(env.size()) - 1 - i;
    return -1;
  };
  switch (f.kind()) {
    case Kind::Var:
    case Kind::NegVar: {
      int ix = lookup(f.name());
      out += f.kind() == Kind::Var ? "v:" : "n:";
      out += ix >= 0 ? "#" + std::to_string(ix) : f.name();
      break;
    }
    case Kind::Top: out += "T"; break;
    case Kind::Bot: out += "F"; break;
    case Kind::And:
    case Kind::Or:
      out += f.kind() == Kind::And ? "(&" : "(|";
      alpha_rec(f.left(), env, out);
      out += ",";
      alpha_rec(f.right(), env, out);
      out += ")";
      break;
    case Kind::Dia:
    case Kind::Box:
      out += f.kind() == Kind::Dia ? "(<" : "([";
      out += f.name() + "m";
      alpha_rec(f.body(), env, out);
      out += ")";
      break;
    case Kind::Mu:
    case Kind::Nu:
      out += f.kind() == Kind::Mu ? "(u." : "(g.";
      env.push_back(f.name());
      alpha_rec(f.body(), env, out);
      env.pop_back();
      out += ")";
      break;
  }
}

std::string Formula::alpha_key() const {
  std::string out;
  std::vector<std::string> env;
  alpha_rec(*this, env, out);
  return out;
}

// --- binding structure -------------------------------------------------------

static void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                          std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Var:
    case Kind::NegVar:
      if (!bound.count(f.name())) out.insert(f.name());
      break;
    case Kind::Top:
    case Kind::Bot:
      break;
    case Kind::And:
    case Kind::Or:
      free_vars_rec(f.left(), bound, out);
      free_vars_rec(f.right(), bound, out);
      break;
    case Kind::Dia:
    case Kind::Box:
      free_vars_rec(f.body(), bound, out);
      break;
    case Kind::Mu:
    case Kind::Nu: {
      bool fresh = bound.insert(f.name()).second;
      free_vars_rec(f.body(), bound, out);
      if (fresh) bound.erase(f.name());
      break;
    }
  }
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

std::set<std::string> bound_vars(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (is_binder(g.kind())) out.insert(g.name());
    if (g.node()->lhs) rec(g.left());
    if (g.node()->rhs) rec(g.right());
  };
  rec(f);
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (!g.name().empty()) out.insert(g.name());
    if (g.node()->lhs) rec(g.left());
    if (g.node()->rhs) rec(g.right());
  };
  rec(f);
  return out;
}

// Positive = no free occurrence of x under NegVar; binders named x shield
// their bodies.
static bool positive_rec(const Formula& f, const std::string& x) {
  switch (f.kind()) {
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::NegVar:
      return f.name() != x;
    case Kind::And:
    case Kind::Or:
      return positive_rec(f.left(), x) && positive_rec(f.right(), x);
    case Kind::Dia:
    case Kind::Box:
      return positive_rec(f.body(), x);
    case Kind::Mu:
    case Kind::Nu:
      if (f.name() == x) return true;
      return positive_rec(f.body(), x);
  }
  return true;
}

bool is_positive_in(const Formula& f, const std::string& x) {
  return positive_rec(f, x);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

bool is_well_named(const Formula& f) {
  std::set<std::string> fv = free_vars(f);
  std::set<std::string> seen;
  bool ok = true;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (!ok) return;
    if (is_binder(g.kind())) {
      if (fv.count(g.name()) || !seen.insert(g.name()).second) {
        ok = false;
        return;
      }
    }
    if (g.node()->lhs) rec(g.left());
    if (g.node()->rhs) rec(g.right());
  };
  rec(f);
  return ok;
}

// Rename variable occurrences bound by the environment `ren`; binders deeper
// in with the same original name shadow the renaming.
static Formula rename_bound(const Formula& f,
                            std::map<std::string, std::string>& ren) {
  switch (f.kind()) {
    case Kind::Var: {
      auto it = ren.find(f.name());
      return it == ren.end() ? f : Formula::var(it->second);
    }
    case Kind::NegVar: {
      auto it = ren.find(f.name());
      return it == ren.end() ? f : Formula::neg_var(it->second);
    }
    default:
      return f;  // handled by caller for composite nodes
  }
}

static Formula well_named_rec(const Formula& f, std::set<std::string>& used,
                              std::map<std::string, std::string> ren) {
  switch (f.kind()) {
    case Kind::Var:
    case Kind::NegVar:
      return rename_bound(f, ren);
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::And:
      return Formula::conj(well_named_rec(f.left(), used, ren),
                           well_named_rec(f.right(), used, ren));
    case Kind::Or:
      return Formula::disj(well_named_rec(f.left(), used, ren),
                           well_named_rec(f.right(), used, ren));
    case Kind::Dia:
      return Formula::dia(f.name(), well_named_rec(f.body(), used, ren));
    case Kind::Box:
      return Formula::box(f.name(), well_named_rec(f.body(), used, ren));
    case Kind::Mu:
    case Kind::Nu: {
      std::string nm = f.name();
      if (used.count(nm)) {
        nm = fresh_name(nm, used);
        ren[f.name()] = nm;
      } else {
        ren.erase(f.name());
      }
      used.insert(nm);
      Formula body = well_named_rec(f.body(), used, ren);
      return f.kind() == Kind::Mu ? Formula::mu(nm, body) : Formula::nu(nm, body);
    }
  }
  return f;
}

Formula make_well_named(const Formula& f) {
  std::set<std::string> used = free_vars(f);
  return well_named_rec(f, used, {});
}

// --- substitution -------------------------------------------------------------

Substitution::Substitution(std::vector<std::pair<std::string, Formula>> items)
    : items_(std::move(items)) {
  std::set<std::string> seen;
  for (auto& [v, _] : items_)
    if (!seen.insert(v).second)
      throw Error("substitution domain contains '" + v + "' twice");
}

Substitution Substitution::single(const std::string& var, const Formula& f) {
  return Substitution({{var, f}});
}

const Formula* Substitution::lookup(const std::string& var) const {
  for (auto& [v, f] : items_)
    if (v == var) return &f;
  return nullptr;
}

std::set<std::string> Substitution::domain() const {
  std::set<std::string> out;
  for (auto& [v, _] : items_) out.insert(v);
  return out;
}

namespace {

struct SubstEnv {
  // domain var -> replacement (nullptr entry means "shadowed")
  std::vector<std::pair<std::string, Formula>> map;
  std::set<std::string> avoid;  // names a fresh binder must not clash with

  const Formula* lookup(const std::string& v) const {
    for (auto it = map.rbegin(); it != map.rend(); ++it)
      if (it->first == v) return it->second.empty() ? nullptr : &it->second;
    return nullptr;
  }
  bool shadowed_or_mapped(const std::string& v) const {
    for (auto it = map.rbegin(); it != map.rend(); ++it)
      if (it->first == v) return true;
    return false;
  }
};

Formula subst_rec(const Formula& f, SubstEnv& env) {
  switch (f.kind()) {
    case Kind::Var: {
      const Formula* r = env.lookup(f.name());
      return r ? *r : f;
    }
    case Kind::NegVar: {
      const Formula* r = env.lookup(f.name());
      if (!r) return f;
      // NNF: substituting psi for a negated variable yields dualize(psi).
      return dualize(*r);
    }
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::And:
      return Formula::conj(subst_rec(f.left(), env), subst_rec(f.right(), env));
    case Kind::Or:
      return Formula::disj(subst_rec(f.left(), env), subst_rec(f.right(), env));
    case Kind::Dia:
      return Formula::dia(f.name(), subst_rec(f.body(), env));
    case Kind::Box:
      return Formula::box(f.name(), subst_rec(f.body(), env));
    case Kind::Mu:
    case Kind::Nu: {
      std::string nm = f.name();
      // Capture check: some active replacement whose domain var occurs free
      // in the body mentions nm free.
      std::set<std::string> body_free = free_vars(f.body());
      bool capture = false;
      for (auto& [v, repl] : env.map) {
        if (repl.empty() || v == nm || !body_free.count(v)) continue;
        if (free_vars(repl).count(nm)) capture = true;
      }
      Formula body = f.body();
      std::size_t depth = env.map.size();
      if (capture) {
        std::set<std::string> used = env.avoid;
        for (auto& n : all_names(body)) used.insert(n);
        std::string nm2 = fresh_name(nm, used);
        env.map.emplace_back(nm, Formula::var(nm2));
        env.avoid.insert(nm2);
        nm = nm2;
      } else {
        env.map.emplace_back(nm, Formula());  // shadow
      }
      Formula nb = subst_rec(body, env);
      env.map.resize(depth);
      return f.kind() == Kind::Mu ? Formula::mu(nm, nb) : Formula::nu(nm, nb);
    }
  }
  return f;
}

}  // namespace

Formula apply_subst(const Formula& f, const Substitution& s) {
  if (s.empty()) return f;
  SubstEnv env;
  for (auto& [v, r] : s.items()) {
    env.map.emplace_back(v, r);
    for (auto& n : all_names(r)) env.avoid.insert(n);
  }
  for (auto& n : all_names(f)) env.avoid.insert(n);
  return subst_rec(f, env);
}

Substitution compose_subst(const Substitution& s1, const Substitution& s2) {
  std::vector<std::pair<std::string, Formula>> items;
  for (auto& [v, f] : s1.items()) items.emplace_back(v, apply_subst(f, s2));
  return Substitution(std::move(items));
}

Formula literal_subst(const Formula& f, const std::string& var,
                      const Formula& pos, const Formula& neg) {
  std::function<Formula(const Formula&, bool)> rec =
      [&](const Formula& g, bool shadowed) -> Formula {
    switch (g.kind()) {
      case Kind::Var:
        return (!shadowed && g.name() == var) ? pos : g;
      case Kind::NegVar:
        return (!shadowed && g.name() == var) ? neg : g;
      case Kind::Top:
      case Kind::Bot:
        return g;
      case Kind::And:
        return Formula::conj(rec(g.left(), shadowed), rec(g.right(), shadowed));
      case Kind::Or:
        return Formula::disj(rec(g.left(), shadowed), rec(g.right(), shadowed));
      case Kind::Dia:
        return Formula::dia(g.name(), rec(g.body(), shadowed));
      case Kind::Box:
        return Formula::box(g.name(), rec(g.body(), shadowed));
      case Kind::Mu:
      case Kind::Nu: {
        bool sh = shadowed || g.name() == var;
        Formula body = rec(g.body(), sh);
        return g.kind() == Kind::Mu ? Formula::mu(g.name(), body)
                                    : Formula::nu(g.name(), body);
      }
    }
    return g;
  };
  return rec(f, false);
}

// --- occurrences ----------------------------------------------------------------

Formula subformula_at(const Formula& f, const OccAddress& occ) {
  Formula cur = f;
  for (int step : occ) {
    const auto& n = cur.node();
    Formula::NodePtr next = step == 0 ? n->lhs : n->rhs;
    if (step < 0 || step > 1 || !next)
      throw Error("occurrence address does not point into the formula");
    cur = Formula(next);
  }
  return cur;
}

std::vector<OccAddress> occurrences_of(const Formula& f, const std::string& x,
                                       bool free_only) {
  std::vector<OccAddress> out;
  OccAddress path;
  std::function<void(const Formula&, bool)> rec = [&](const Formula& g,
                                                      bool shadowed) {
    switch (g.kind()) {
      case Kind::Var:
      case Kind::NegVar:
        if (g.name() == x && !(free_only && shadowed)) out.push_back(path);
        break;
      case Kind::Top:
      case Kind::Bot:
        break;
      case Kind::And:
      case Kind::Or:
        path.push_back(0);
        rec(g.left(), shadowed);
        path.back() = 1;
        rec(g.right(), shadowed);
        path.pop_back();
        break;
      case Kind::Dia:
      case Kind::Box:
        path.push_back(0);
        rec(g.body(), shadowed);
        path.pop_back();
        break;
      case Kind::Mu:
      case Kind::Nu:
        path.push_back(0);
        rec(g.body(), shadowed || g.name() == x);
        path.pop_back();
        break;
    }
  };
  rec(f, false);
  return out;
}

// --- standard contexts and closure -----------------------------------------------

namespace {

// Collect, for each bound variable of a well-named formula, its binding
// subformula.
std::map<std::string, Formula> binder_map(const Formula& f) {
  std::map<std::string, Formula> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (is_binder(g.kind())) out.emplace(g.name(), g);
    if (g.node()->lhs) rec(g.left());
    if (g.node()->rhs) rec(g.right());
  };
  rec(f);
  return out;
}

// Full closure expansion of a bound variable z of a well-named formula:
// Q_z.psi_z with every free variable bound elsewhere in f expanded in turn.
Formula expand_var(const std::string& z,
                   const std::map<std::string, Formula>& binders,
                   std::map<std::string, Formula>& memo) {
  auto hit = memo.find(z);
  if (hit != memo.end()) return hit->second;
  Formula qz = binders.at(z);
  std::vector<std::pair<std::string, Formula>> items;
  for (auto& w : free_vars(qz))
    if (binders.count(w)) items.emplace_back(w, expand_var(w, binders, memo));
  Formula result = items.empty() ? qz : apply_subst(qz, Substitution(items));
  memo.emplace(z, result);
  return result;
}

void require_well_named(const Formula& f, const char* op) {
  if (!is_well_named(f))
    throw Error(std::string(op) + " requires a well-named formula");
}

// Order the bound variables of the context so the condition "if Q_j is a
// subformula of psi_i then i < j" holds: inner binders first in the chain
// notation [Q^n/z_n] ... [Q^1/z_1] read left to right during application.
// Nesting depth of a binder is a linearization of the subformula order.
std::vector<std::string> order_context_vars(const Formula& f,
                                            const std::set<std::string>& vars) {
  std::map<std::string, int> depth;
  std::function<void(const Formula&, int)> rec = [&](const Formula& g, int d) {
    if (is_binder(g.kind())) depth.emplace(g.name(), d);
    if (g.node()->lhs) rec(g.left(), d + 1);
    if (g.node()->rhs) rec(g.right(), d + 1);
  };
  rec(f, 0);
  std::vector<std::string> ordered(vars.begin(), vars.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const std::string& a, const std::string& b) {
                     return depth.at(a) > depth.at(b);
                   });
  return ordered;
}

}  // namespace

std::vector<std::pair<std::string, Formula>> standard_context_chain(
    const Formula& f, const OccAddress& occ) {
  require_well_named(f, "standard_context");
  Formula psi = subformula_at(f, occ);
  auto binders = binder_map(f);
  std::set<std::string> vars;
  for (auto& v : free_vars(psi))
    if (binders.count(v)) vars.insert(v);
  std::vector<std::pair<std::string, Formula>> chain;
  for (auto& z : order_context_vars(f, vars)) chain.emplace_back(z, binders.at(z));
  return chain;
}

Substitution standard_context(const Formula& f, const OccAddress& occ) {
  require_well_named(f, "standard_context");
  auto binders = binder_map(f);
  std::map<std::string, Formula> memo;
  std::vector<std::pair<std::string, Formula>> items;
  for (auto& chain_entry : standard_context_chain(f, occ))
    items.emplace_back(chain_entry.first,
                       expand_var(chain_entry.first, binders, memo));
  return Substitution(std::move(items));
}

std::vector<Formula> closure(const Formula& f) {
  require_well_named(f, "closure");
  auto binders = binder_map(f);
  std::map<std::string, Formula> memo;
  std::vector<Formula> out;
  std::set<std::string> seen;
  std::function<void(const Formula&)> visit = [&](const Formula& psi) {
    std::vector<std::pair<std::string, Formula>> items;
    for (auto& v : free_vars(psi))
      if (binders.count(v)) items.emplace_back(v, expand_var(v, binders, memo));
    Formula elem = items.empty() ? psi : apply_subst(psi, Substitution(items));
    if (seen.insert(elem.alpha_key()).second) out.push_back(elem);
    if (psi.node()->lhs) visit(psi.left());
    if (psi.node()->rhs) visit(psi.right());
  };
  visit(f);
  return out;
}

std::vector<Formula> closure_by_rules(const Formula& f) {
  require_well_named(f, "closure");
  std::vector<Formula> out;
  std::set<std::string> seen;
  std::vector<Formula> work{f};
  seen.insert(f.alpha_key());
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    out.push_back(g);
    std::vector<Formula> next;
    switch (g.kind()) {
      case Kind::And:
      case Kind::Or:
        next = {g.left(), g.right()};
        break;
      case Kind::Dia:
      case Kind::Box:
        next = {g.body()};
        break;
      case Kind::Mu:
      case Kind::Nu:
        next = {apply_subst(g.body(), Substitution::single(g.name(), g))};
        break;
      default:
        break;
    }
    for (auto& h : next)
      if (seen.insert(h.alpha_key()).second) work.push_back(h);
  }
  return out;
}

// --- dualization ------------------------------------------------------------------

static Formula dualize_rec(const Formula& f, std::set<std::string>& bound) {
  switch (f.kind()) {
    case Kind::Var:
      return bound.count(f.name()) ? f : Formula::neg_var(f.name());
    case Kind::NegVar:
      return Formula::var(f.name());
    case Kind::Top:
      return Formula::bot();
    case Kind::Bot:
      return Formula::top();
    case Kind::And:
      return Formula::disj(dualize_rec(f.left(), bound),
                           dualize_rec(f.right(), bound));
    case Kind::Or:
      return Formula::conj(dualize_rec(f.left(), bound),
                           dualize_rec(f.right(), bound));
    case Kind::Dia:
      return Formula::box(f.name(), dualize_rec(f.body(), bound));
    case Kind::Box:
      return Formula::dia(f.name(), dualize_rec(f.body(), bound));
    case Kind::Mu:
    case Kind::Nu: {
      bool fresh = bound.insert(f.name()).second;
      Formula body = dualize_rec(f.body(), bound);
      if (fresh) bound.erase(f.name());
      return f.kind() == Kind::Mu ? Formula::nu(f.name(), body)
                                  : Formula::mu(f.name(), body);
    }
  }
  return f;
}

Formula dualize(const Formula& f) {
  std::set<std::string> bound;
  return dualize_rec(f, bound);
}

}  // namespace mucalc
