#include "mucalc/fragment.hpp"

#include <deque>
#include <functional>

namespace mucalc {

int FormulaGraph::node_at(const OccAddress& occ) const {
  int cur = 0;
  for (int step : occ) {
    const auto& ch = nodes[static_cast<std::size_t>(cur)].children;
    if (step < 0 || step >= static_cast<int>(ch.size()))
      throw Error("occurrence address does not point into the formula");
    cur = ch[static_cast<std::size_t>(step)];
  }
  return cur;
}

FormulaGraph build_graph(const Formula& f) {
  FormulaGraph g;
  g.formula = f;
  // binder scope: variable -> node id of the binding mu/nu
  std::vector<std::pair<std::string, int>> scope;
  OccAddress path;
  std::function<int(const Formula&, int)> rec = [&](const Formula& cur,
                                                    int parent) -> int {
    int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back({cur.kind(), cur.name(), path, parent, {}, -1});
    if (cur.kind() == Kind::Var || cur.kind() == Kind::NegVar) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == cur.name()) {
          g.nodes[static_cast<std::size_t>(id)].back_edge = it->second;
          break;
        }
    }
    if (is_binder(cur.kind())) scope.emplace_back(cur.name(), id);
    std::size_t scope_mark = scope.size();
    auto child = [&](const Formula& c, int index) {
      path.push_back(index);
      int cid = rec(c, id);
      path.pop_back();
      g.nodes[static_cast<std::size_t>(id)].children.push_back(cid);
    };
    if (cur.node()->lhs) child(cur.left(), 0);
    if (cur.node()->rhs) child(cur.right(), 1);
    if (is_binder(cur.kind())) scope.resize(scope_mark - 1);
    return id;
  };
  rec(f, -1);
  return g;
}

const char* to_string(OccurrenceClass c) {
  switch (c) {
    case OccurrenceClass::NotBad: return "not-bad";
    case OccurrenceClass::Boxed: return "boxed";
    case OccurrenceClass::VeryBad: return "very-bad";
  }
  return "?";
}

namespace {

// Reachability from the root with a "crossed a box" bit.  reach[2*v+b] is
// true when some path from the root ends at v having visited a box node
// (b=1) or not (b=0).  Back edges make this a genuine graph search.
std::vector<bool> box_reachability(const FormulaGraph& g) {
  std::size_t n = g.nodes.size();
  std::vector<bool> reach(2 * n, false);
  std::deque<std::pair<int, int>> work;
  int b0 = g.nodes[0].kind == Kind::Box ? 1 : 0;
  reach[static_cast<std::size_t>(b0)] = true;
  work.emplace_back(0, b0);
  while (!work.empty()) {
    auto [u, b] = work.front();
    work.pop_front();
    auto push = [&](int v, int bv) {
      std::size_t ix = 2 * static_cast<std::size_t>(v) + static_cast<std::size_t>(bv);
      if (!reach[ix]) {
        reach[ix] = true;
        work.emplace_back(v, bv);
      }
    };
    const auto& nu = g.nodes[static_cast<std::size_t>(u)];
    for (int v : nu.children)
      push(v, b | (g.nodes[static_cast<std::size_t>(v)].kind == Kind::Box ? 1 : 0));
    if (nu.back_edge >= 0) push(nu.back_edge, b);
  }
  return reach;
}

bool simple_path_boxed(const FormulaGraph& g, int node) {
  for (int cur = node; cur >= 0; cur = g.nodes[static_cast<std::size_t>(cur)].parent)
    if (g.nodes[static_cast<std::size_t>(cur)].kind == Kind::Box) return true;
  return false;
}

}  // namespace

OccurrenceClass classify_occurrence(const FormulaGraph& g, const OccAddress& occ,
                                    const std::string& x) {
  int node = g.node_at(occ);
  const auto& nd = g.nodes[static_cast<std::size_t>(node)];
  if ((nd.kind != Kind::Var && nd.kind != Kind::NegVar) || nd.name != x)
    throw Error("address does not point at an occurrence of '" + x + "'");
  bool boxed = simple_path_boxed(g, node);
  if (boxed) return OccurrenceClass::Boxed;
  std::vector<bool> reach = box_reachability(g);
  bool bad = reach[2 * static_cast<std::size_t>(node) + 1];
  return bad ? OccurrenceClass::VeryBad : OccurrenceClass::NotBad;
}

namespace {

void reject_bound_X(const Formula& f, const std::set<std::string>& X,
                    const char* op) {
  auto bv = bound_vars(f);
  for (auto& x : X)
    if (bv.count(x))
      throw Error(std::string(op) + ": variable '" + x +
                  "' from X is bound in the formula");
}

bool x_free(const Formula& f, const std::set<std::string>& X) {
  auto fv = free_vars(f);
  for (auto& x : X)
    if (fv.count(x)) return false;
  return true;
}

// allow_nu distinguishes the full fragment from the continuous one, which is
// obtained by dropping only the greatest-fixpoint production.
bool in_C_rec(const Formula& f, std::set<std::string> X, bool allow_nu) {
  if (x_free(f, X)) return true;
  switch (f.kind()) {
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::NegVar:
      return false;  // X variables must occur positively
    case Kind::And:
    case Kind::Or:
      return in_C_rec(f.left(), X, allow_nu) && in_C_rec(f.right(), X, allow_nu);
    case Kind::Dia:
      return in_C_rec(f.body(), X, allow_nu);
    case Kind::Box:
      return false;  // no production puts an X variable under a box
    case Kind::Mu:
    case Kind::Nu: {
      if (f.kind() == Kind::Nu && !allow_nu) return false;
      X.insert(f.name());
      return in_C_rec(f.body(), X, allow_nu);
    }
  }
  return false;
}

}  // namespace

bool in_C(const Formula& f, const std::set<std::string>& X) {
  reject_bound_X(f, X, "in_C");
  return in_C_rec(f, X, true);
}

bool in_C0(const Formula& f, const std::set<std::string>& X) {
  reject_bound_X(f, X, "in_C0");
  return in_C_rec(f, X, false);
}

bool is_almost_good(const Formula& f, const std::set<std::string>& X) {
  FormulaGraph g = build_graph(f);
  std::vector<bool> reach = box_reachability(g);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& nd = g.nodes[i];
    if (nd.kind != Kind::Var && nd.kind != Kind::NegVar) continue;
    if (!X.count(nd.name) || nd.back_edge >= 0) continue;  // free X occurrences
    bool bad = reach[2 * i + 1];
    if (bad && !simple_path_boxed(g, static_cast<int>(i)))
      return false;  // very-bad
  }
  return true;
}

}  // namespace mucalc
