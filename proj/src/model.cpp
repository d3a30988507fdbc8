#include "mucalc/model.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

#include "mucalc/transforms.hpp"

namespace mucalc {

KripkeModel::KripkeModel(std::vector<std::string> states,
                         std::vector<std::string> actions)
    : states_(std::move(states)), actions_(std::move(actions)) {
  if (states_.size() > 64) throw Error("models are limited to 64 states");
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (!index_.emplace(states_[i], static_cast<int>(i)).second)
      throw Error("duplicate state id '" + states_[i] + "'");
  for (auto& a : actions_)
    rel_[a].assign(states_.size(), 0);
}

std::set<std::string> KripkeModel::action_set() const {
  return {actions_.begin(), actions_.end()};
}

int KripkeModel::state_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown state '" + id + "'");
  return it->second;
}

bool KripkeModel::has_action(const std::string& a) const {
  return rel_.count(a) != 0;
}

void KripkeModel::add_edge(const std::string& a, const std::string& from,
                           const std::string& to) {
  add_edge(a, state_index(from), state_index(to));
}

void KripkeModel::add_edge(const std::string& a, int from, int to) {
  auto it = rel_.find(a);
  if (it == rel_.end()) throw Error("unknown action '" + a + "'");
  it->second[static_cast<std::size_t>(from)] |= StateSet{1} << to;
}

bool KripkeModel::has_edge(const std::string& a, int from, int to) const {
  return (succ(a, from) >> to) & 1;
}

StateSet KripkeModel::succ(const std::string& a, int from) const {
  auto it = rel_.find(a);
  if (it == rel_.end()) throw Error("unknown action '" + a + "'");
  return it->second[static_cast<std::size_t>(from)];
}

const std::vector<StateSet>& KripkeModel::relation(const std::string& a) const {
  auto it = rel_.find(a);
  if (it == rel_.end()) throw Error("unknown action '" + a + "'");
  return it->second;
}

void KripkeModel::set_valuation(const std::string& prop, StateSet s) {
  if (s & ~full()) throw Error("valuation of '" + prop + "' mentions unknown states");
  val_[prop] = s;
}

StateSet KripkeModel::prop(const std::string& prop) const {
  auto it = val_.find(prop);
  if (it == val_.end()) throw Error("unknown variable '" + prop + "'");
  return it->second;
}

std::vector<std::string> states_of(const KripkeModel& m, StateSet s) {
  std::vector<std::string> out;
  for (int i = 0; i < m.num_states(); ++i)
    if ((s >> i) & 1) out.push_back(m.states()[static_cast<std::size_t>(i)]);
  return out;
}

// --- text format ------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KripkeModel parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> states;
  // (action, from, to) and (prop, states) collected before construction
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::vector<std::string>>> vals;
  std::vector<std::string> actions;
  bool saw_states = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error("model syntax: expected 'key: ...' in line '" + line + "'");
    std::string head = strip(line.substr(0, colon));
    std::string rest = strip(line.substr(colon + 1));
    if (head == "states") {
      states = split_ws(rest);
      saw_states = true;
    } else if (head.rfind("rel ", 0) == 0) {
      std::string a = strip(head.substr(4));
      if (a.empty()) throw Error("model syntax: missing action name");
      if (std::find(actions.begin(), actions.end(), a) == actions.end())
        actions.push_back(a);
      std::istringstream pairs(rest);
      std::string item;
      while (std::getline(pairs, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        auto arrow = item.find("->");
        if (arrow == std::string::npos)
          throw Error("model syntax: expected 'from->to' in '" + item + "'");
        edges.emplace_back(a, strip(item.substr(0, arrow)),
                           strip(item.substr(arrow + 2)));
      }
    } else if (head.rfind("val ", 0) == 0) {
      std::string p = strip(head.substr(4));
      if (p.empty()) throw Error("model syntax: missing variable name");
      vals.emplace_back(p, split_ws(rest));
    } else {
      throw Error("model syntax: unknown line '" + line + "'");
    }
  }
  if (!saw_states) throw Error("model syntax: missing 'states:' line");
  KripkeModel m(states, actions);
  for (auto& [a, from, to] : edges) m.add_edge(a, from, to);
  for (auto& [p, members] : vals) {
    StateSet s = 0;
    for (auto& id : members) s |= StateSet{1} << m.state_index(id);
    m.set_valuation(p, s);
  }
  return m;
}

std::string print_model(const KripkeModel& m) {
  std::ostringstream out;
  out << "states:";
  for (auto& s : m.states()) out << " " << s;
  out << "\n";
  for (auto& a : m.actions()) {
    out << "rel " << a << ":";
    bool first = true;
    for (int i = 0; i < m.num_states(); ++i) {
      StateSet ss = m.succ(a, i);
      for (int j = 0; j < m.num_states(); ++j)
        if ((ss >> j) & 1) {
          out << (first ? " " : ", ") << m.states()[static_cast<std::size_t>(i)]
              << "->" << m.states()[static_cast<std::size_t>(j)];
          first = false;
        }
    }
    out << "\n";
  }
  for (auto& [p, s] : m.valuation()) {
    out << "val " << p << ":";
    for (auto& id : states_of(m, s)) out << " " << id;
    out << "\n";
  }
  return out.str();
}

// --- evaluation ------------------------------------------------------------------

namespace {

struct EvalEnv {
  const KripkeModel& m;
  std::vector<std::pair<std::string, StateSet>> bound;

  StateSet lookup(const std::string& v, bool negated) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first == v) return negated ? (m.full() & ~it->second) : it->second;
    StateSet s = m.prop(v);
    return negated ? (m.full() & ~s) : s;
  }
};

StateSet eval_rec(const Formula& f, EvalEnv& env) {
  const KripkeModel& m = env.m;
  switch (f.kind()) {
    case Kind::Var:
      return env.lookup(f.name(), false);
    case Kind::NegVar:
      return env.lookup(f.name(), true);
    case Kind::Top:
      return m.full();
    case Kind::Bot:
      return 0;
    case Kind::And:
      return eval_rec(f.left(), env) & eval_rec(f.right(), env);
    case Kind::Or:
      return eval_rec(f.left(), env) | eval_rec(f.right(), env);
    case Kind::Dia: {
      StateSet body = eval_rec(f.body(), env);
      const auto& rel = m.relation(f.name());
      StateSet out = 0;
      for (int i = 0; i < m.num_states(); ++i)
        if (rel[static_cast<std::size_t>(i)] & body) out |= StateSet{1} << i;
      return out;
    }
    case Kind::Box: {
      StateSet body = eval_rec(f.body(), env);
      const auto& rel = m.relation(f.name());
      StateSet out = 0;
      for (int i = 0; i < m.num_states(); ++i)
        if (!(rel[static_cast<std::size_t>(i)] & ~body)) out |= StateSet{1} << i;
      return out;
    }
    case Kind::Mu:
    case Kind::Nu: {
      StateSet cur = f.kind() == Kind::Mu ? 0 : m.full();
      env.bound.emplace_back(f.name(), cur);
      for (int step = 0; step <= m.num_states() + 1; ++step) {
        env.bound.back().second = cur;
        StateSet next = eval_rec(f.body(), env);
        if (next == cur) break;
        cur = next;
      }
      env.bound.pop_back();
      return cur;
    }
  }
  return 0;
}

}  // namespace

StateSet eval(const KripkeModel& m, const Formula& f) {
  EvalEnv env{m, {}};
  return eval_rec(f, env);
}

bool eval_at(const KripkeModel& m, const std::string& state, const Formula& f) {
  return (eval(m, f) >> m.state_index(state)) & 1;
}

std::vector<StateSet> approximants(const KripkeModel& m, const Formula& f,
                                   const std::string& x) {
  if (!is_positive_in(f, x))
    throw Error("approximants: '" + x + "' must occur positively");
  std::vector<StateSet> trace{0};
  for (;;) {
    KripkeModel mv = variant(m, x, trace.back());
    StateSet next = eval(mv, f);
    bool done = next == trace.back();
    trace.push_back(next);
    if (done) return trace;
    if (static_cast<int>(trace.size()) > m.num_states() + 2)
      throw Error("approximants: trace failed to stabilize (non-monotone?)");
  }
}

int closure_ordinal_on(const KripkeModel& m, const Formula& f,
                       const std::string& x) {
  return static_cast<int>(approximants(m, f, x).size()) - 2;
}

// --- bisimulation -----------------------------------------------------------------

bool bisimilar(const KripkeModel& m1, const std::string& s1,
               const KripkeModel& m2, const std::string& s2,
               const std::set<std::string>& props,
               const std::set<std::string>& actions) {
  int n1 = m1.num_states(), n2 = m2.num_states();
  auto prop_of = [](const KripkeModel& m, const std::string& p) -> StateSet {
    return m.has_prop(p) ? m.prop(p) : 0;
  };
  std::vector<bool> rel(static_cast<std::size_t>(n1 * n2), true);
  auto at = [&](int i, int j) -> std::vector<bool>::reference {
    return rel[static_cast<std::size_t>(i * n2 + j)];
  };
  for (auto& p : props) {
    StateSet v1 = prop_of(m1, p), v2 = prop_of(m2, p);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        if (((v1 >> i) & 1) != ((v2 >> j) & 1)) at(i, j) = false;
  }
  auto succ_of = [](const KripkeModel& m, const std::string& a, int i) -> StateSet {
    return m.has_action(a) ? m.succ(a, i) : 0;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        if (!at(i, j)) continue;
        bool ok = true;
        for (auto& a : actions) {
          StateSet f1 = succ_of(m1, a, i), f2 = succ_of(m2, a, j);
          for (int i2 = 0; ok && i2 < n1; ++i2) {
            if (!((f1 >> i2) & 1)) continue;
            bool matched = false;
            for (int j2 = 0; j2 < n2 && !matched; ++j2)
              matched = ((f2 >> j2) & 1) && at(i2, j2);
            ok = matched;
          }
          for (int j2 = 0; ok && j2 < n2; ++j2) {
            if (!((f2 >> j2) & 1)) continue;
            bool matched = false;
            for (int i2 = 0; i2 < n1 && !matched; ++i2)
              matched = ((f1 >> i2) & 1) && at(i2, j2);
            ok = matched;
          }
          if (!ok) break;
        }
        if (!ok) {
          at(i, j) = false;
          changed = true;
        }
      }
  }
  return at(m1.state_index(s1), m2.state_index(s2));
}

// --- model combinators ---------------------------------------------------------------

KripkeModel induced_submodel(const KripkeModel& m, StateSet s) {
  if (s & ~m.full()) throw Error("induced_submodel: not a subset of the states");
  std::vector<std::string> states = states_of(m, s);
  std::vector<int> new_index(static_cast<std::size_t>(m.num_states()), -1);
  int k = 0;
  for (int i = 0; i < m.num_states(); ++i)
    if ((s >> i) & 1) new_index[static_cast<std::size_t>(i)] = k++;
  KripkeModel out(states, m.actions());
  for (auto& a : m.actions())
    for (int i = 0; i < m.num_states(); ++i) {
      if (!((s >> i) & 1)) continue;
      StateSet kept = m.succ(a, i) & s;
      for (int j = 0; j < m.num_states(); ++j)
        if ((kept >> j) & 1)
          out.add_edge(a, new_index[static_cast<std::size_t>(i)],
                       new_index[static_cast<std::size_t>(j)]);
    }
  for (auto& [p, v] : m.valuation()) {
    StateSet nv = 0;
    for (int i = 0; i < m.num_states(); ++i)
      if (((s >> i) & 1) && ((v >> i) & 1))
        nv |= StateSet{1} << new_index[static_cast<std::size_t>(i)];
    out.set_valuation(p, nv);
  }
  return out;
}

KripkeModel disjoint_union(const KripkeModel& m1, const KripkeModel& m2) {
  std::vector<std::string> states;
  for (auto& s : m1.states()) states.push_back("l:" + s);
  for (auto& s : m2.states()) states.push_back("r:" + s);
  std::vector<std::string> actions = m1.actions();
  for (auto& a : m2.actions())
    if (std::find(actions.begin(), actions.end(), a) == actions.end())
      actions.push_back(a);
  KripkeModel out(states, actions);
  int off = m1.num_states();
  for (auto& a : m1.actions())
    for (int i = 0; i < m1.num_states(); ++i)
      for (int j = 0; j < m1.num_states(); ++j)
        if (m1.has_edge(a, i, j)) out.add_edge(a, i, j);
  for (auto& a : m2.actions())
    for (int i = 0; i < m2.num_states(); ++i)
      for (int j = 0; j < m2.num_states(); ++j)
        if (m2.has_edge(a, i, j)) out.add_edge(a, off + i, off + j);
  std::set<std::string> props;
  for (auto& [p, _] : m1.valuation()) props.insert(p);
  for (auto& [p, _] : m2.valuation()) props.insert(p);
  for (auto& p : props) {
    StateSet v = m1.has_prop(p) ? m1.prop(p) : 0;
    StateSet w = m2.has_prop(p) ? m2.prop(p) : 0;
    out.set_valuation(p, v | (w << off));
  }
  return out;
}

KripkeModel variant(const KripkeModel& m, const std::string& x, StateSet s) {
  KripkeModel out = m;
  out.set_valuation(x, s);
  return out;
}

bool is_closed(const KripkeModel& m, StateSet s) {
  for (auto& a : m.actions())
    for (int i = 0; i < m.num_states(); ++i)
      if (((s >> i) & 1) && (m.succ(a, i) & ~s)) return false;
  return true;
}

// --- constructions ---------------------------------------------------------------------

ThomasonModel thomason_model(const KripkeModel& m) {
  for (auto& a : m.actions())
    if (a != "h" && a != "v")
      throw Error("thomason_model: input must be bimodal over {h,v}");
  std::vector<std::string> states;
  for (auto& s : m.states()) states.push_back(s + ".h");
  for (auto& s : m.states()) states.push_back(s + ".v");
  states.push_back("pit");
  KripkeModel out(states, {"a"});
  int n = m.num_states();
  int pit = 2 * n;
  auto h = [&](int i) { return i; };
  auto v = [&](int i) { return n + i; };
  for (int i = 0; i < n; ++i) {
    out.add_edge("a", h(i), v(i));
    out.add_edge("a", v(i), h(i));
    out.add_edge("a", h(i), pit);
    if (m.has_action("h")) {
      StateSet ss = m.succ("h", i);
      for (int j = 0; j < n; ++j)
        if ((ss >> j) & 1) out.add_edge("a", h(i), h(j));
    }
    if (m.has_action("v")) {
      StateSet ss = m.succ("v", i);
      for (int j = 0; j < n; ++j)
        if ((ss >> j) & 1) out.add_edge("a", v(i), v(j));
    }
  }
  for (auto& [p, val] : m.valuation()) {
    StateSet nv = 0;
    for (int i = 0; i < n; ++i)
      if ((val >> i) & 1) nv |= (StateSet{1} << h(i)) | (StateSet{1} << v(i));
    out.set_valuation(p, nv);
  }
  ThomasonModel result{out, {}};
  for (auto& s : m.states()) result.embedding[s] = s + ".h";
  return result;
}

KripkeModel sum_witness_model(const KripkeModel& m_alpha, const KripkeModel& m_beta,
                              const std::string& p) {
  if (m_alpha.actions().size() > 1 || m_beta.actions().size() > 1)
    throw Error("sum_witness_model: inputs must be monomodal");
  if (m_alpha.has_prop(p) || m_beta.has_prop(p))
    throw Error("sum_witness_model: '" + p + "' already valued");
  std::string a = !m_alpha.actions().empty() ? m_alpha.actions()[0]
                  : !m_beta.actions().empty() ? m_beta.actions()[0]
                                              : "a";
  if (!m_beta.actions().empty() && m_beta.actions()[0] != a)
    throw Error("sum_witness_model: inputs use different actions");
  std::vector<std::string> states;
  for (auto& s : m_alpha.states()) states.push_back("a:" + s);
  for (auto& s : m_beta.states()) states.push_back("b:" + s);
  KripkeModel out(states, {a});
  int na = m_alpha.num_states(), nb = m_beta.num_states();
  if (!m_alpha.actions().empty())
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j)
        if (m_alpha.has_edge(a, i, j)) out.add_edge(a, i, j);
  if (!m_beta.actions().empty())
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        if (m_beta.has_edge(a, i, j)) out.add_edge(a, na + i, na + j);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < na; ++j) out.add_edge(a, na + i, j);
  std::set<std::string> props;
  for (auto& [q, _] : m_alpha.valuation()) props.insert(q);
  for (auto& [q, _] : m_beta.valuation()) props.insert(q);
  for (auto& q : props) {
    StateSet v = m_alpha.has_prop(q) ? m_alpha.prop(q) : 0;
    StateSet w = m_beta.has_prop(q) ? m_beta.prop(q) : 0;
    out.set_valuation(q, v | (w << na));
  }
  StateSet beta_states = ((nb == 64 ? ~StateSet{0} : (StateSet{1} << nb) - 1)) << na;
  out.set_valuation(p, beta_states);
  return out;
}

KripkeModel ordinal_chain_model(int n) {
  if (n < 1) throw Error("ordinal_chain_model: n must be >= 1");
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
  KripkeModel out(states, {"h", "v"});
  for (int i = 0; i < n; ++i) out.add_edge("h", i, i);
  for (int i = 1; i < n; ++i) out.add_edge("v", i, i - 1);
  return out;
}

KripkeModel chain_model(int n, const std::string& p) {
  if (n < 1) throw Error("chain_model: n must be >= 1");
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
  KripkeModel out(states, {"a"});
  for (int i = 0; i + 1 < n; ++i) out.add_edge("a", i, i + 1);
  out.set_valuation(p, StateSet{1} << (n - 1));
  return out;
}

bool is_acceptable(const KripkeModel& m, const Formula& chi) {
  return eval(m, master_box(chi, m.action_set())) == m.full();
}

}  // namespace mucalc
