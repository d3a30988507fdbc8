#include "mucalc/game.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mucalc/parser.hpp"

namespace mucalc {

namespace {

// Structural rank of a fixpoint subformula: smallest number of the right
// parity that dominates every fixpoint nested inside it.
int structural_rank(const Formula& f, std::map<std::string, int>& memo) {
  auto hit = memo.find(f.key());
  if (hit != memo.end()) return hit->second;
  int inner = 0;
  if (f.node()->lhs) inner = std::max(inner, structural_rank(f.left(), memo));
  if (f.node()->rhs) inner = std::max(inner, structural_rank(f.right(), memo));
  int r = inner;
  if (f.kind() == Kind::Mu) {
    r = inner % 2 == 1 ? inner : inner + 1;
  } else if (f.kind() == Kind::Nu) {
    r = inner % 2 == 0 ? inner : inner + 1;
  }
  memo.emplace(f.key(), r);
  return r;
}

// Vacuous binders (Q z.psi with z not free in psi) unfold to formulas that can
// be alpha-equal to unrelated closure elements, which would force one priority
// onto fixpoints of both parities.  They are semantically transparent, so the
// arena is built on the stripped formula.
Formula strip_vacuous_binders(const Formula& f) {
  if (is_binder(f.kind()) && free_vars(f.body()).count(f.name()) == 0)
    return strip_vacuous_binders(f.body());
  if (is_binder(f.kind())) {
    Formula b = strip_vacuous_binders(f.body());
    return f.kind() == Kind::Mu ? Formula::mu(f.name(), b)
                                : Formula::nu(f.name(), b);
  }
  if (is_modal(f.kind())) {
    Formula b = strip_vacuous_binders(f.body());
    return f.kind() == Kind::Dia ? Formula::dia(f.name(), b)
                                 : Formula::box(f.name(), b);
  }
  if (is_binary(f.kind())) {
    Formula l = strip_vacuous_binders(f.left());
    Formula r = strip_vacuous_binders(f.right());
    return f.kind() == Kind::And ? Formula::conj(l, r) : Formula::disj(l, r);
  }
  return f;
}

}  // namespace

RankFunction rank_function(const Formula& f) {
  if (!is_well_named(f)) throw Error("rank_function requires a well-named formula");
  std::map<std::string, int> memo;
  structural_rank(f, memo);
  RankFunction out;
  // closure elements correspond to subformulas; rank the fixpoint ones
  std::vector<Formula> sub;
  std::function<void(const Formula&)> collect = [&](const Formula& g) {
    sub.push_back(g);
    if (g.node()->lhs) collect(g.left());
    if (g.node()->rhs) collect(g.right());
  };
  collect(f);
  // reuse the closure machinery: elem(psi) = psi with bound vars expanded
  std::vector<Formula> cl = closure(f);
  std::map<std::string, const Formula*> cl_by_key;
  for (auto& e : cl) cl_by_key.emplace(e.alpha_key(), &e);
  // walk subformulas together with their closure elements by recomputing the
  // standard context expansion through closure() order: both traversals are
  // pre-order over Sub(f), so align by recomputation
  std::function<void(const Formula&, const OccAddress&)> assign =
      [&](const Formula& g, const OccAddress& addr) {
        if (is_binder(g.kind())) {
          Formula elem = apply_subst(g, standard_context(f, addr));
          int r = structural_rank(g, memo);
          auto [it, fresh] = out.by_alpha_key.emplace(elem.alpha_key(), r);
          if (!fresh) it->second = std::max(it->second, r);
        }
        OccAddress a = addr;
        if (g.node()->lhs) {
          a.push_back(0);
          assign(g.left(), a);
          a.pop_back();
        }
        if (g.node()->rhs) {
          a.push_back(1);
          assign(g.right(), a);
        }
      };
  assign(f, {});
  return out;
}

ParityGame build_game(const KripkeModel& m, const Formula& f_in) {
  if (!is_well_named(f_in)) throw Error("build_game requires a well-named formula");
  Formula f = strip_vacuous_binders(f_in);
  ParityGame g;
  g.model = &m;
  g.cl = closure(f);
  g.num_cl = static_cast<int>(g.cl.size());
  std::map<std::string, int> cl_index;
  for (int i = 0; i < g.num_cl; ++i) cl_index.emplace(g.cl[static_cast<std::size_t>(i)].alpha_key(), i);
  auto ix = [&](const Formula& e) {
    auto it = cl_index.find(e.alpha_key());
    if (it == cl_index.end()) throw Error("internal: formula outside its closure");
    return it->second;
  };
  RankFunction rank = rank_function(f);
  int n = m.num_states();
  g.owner.assign(static_cast<std::size_t>(n * g.num_cl), Player::Adam);
  g.priority.assign(static_cast<std::size_t>(n * g.num_cl), 0);
  g.edges.assign(static_cast<std::size_t>(n * g.num_cl), {});
  for (int c = 0; c < g.num_cl; ++c) {
    const Formula& e = g.cl[static_cast<std::size_t>(c)];
    int prio = rank.rank_of(e);
    for (int s = 0; s < n; ++s) {
      int p = g.position(s, c);
      auto pos = static_cast<std::size_t>(p);
      g.priority[pos] = prio;
      switch (e.kind()) {
        case Kind::Top:
          g.owner[pos] = Player::Adam;  // Adam stuck: Eva wins
          break;
        case Kind::Bot:
          g.owner[pos] = Player::Eva;
          break;
        case Kind::Var:
          g.owner[pos] = ((m.prop(e.name()) >> s) & 1) ? Player::Adam : Player::Eva;
          break;
        case Kind::NegVar:
          g.owner[pos] = ((m.prop(e.name()) >> s) & 1) ? Player::Eva : Player::Adam;
          break;
        case Kind::And:
        case Kind::Or:
          g.owner[pos] = e.kind() == Kind::And ? Player::Adam : Player::Eva;
          g.edges[pos] = {g.position(s, ix(e.left())), g.position(s, ix(e.right()))};
          break;
        case Kind::Dia:
        case Kind::Box: {
          g.owner[pos] = e.kind() == Kind::Dia ? Player::Eva : Player::Adam;
          int body = ix(e.body());
          StateSet ss = m.succ(e.name(), s);
          for (int t = 0; t < n; ++t)
            if ((ss >> t) & 1) g.edges[pos].push_back(g.position(t, body));
          break;
        }
        case Kind::Mu:
        case Kind::Nu: {
          g.owner[pos] = e.kind() == Kind::Mu ? Player::Eva : Player::Adam;
          Formula unfold =
              apply_subst(e.body(), Substitution::single(e.name(), e));
          g.edges[pos] = {g.position(s, ix(unfold))};
          break;
        }
      }
    }
  }
  return g;
}

namespace {

struct Zielonka {
  const ParityGame& g;
  GameSolution sol;

  explicit Zielonka(const ParityGame& game) : g(game) {
    sol.winner.assign(g.size(), Player::Adam);
    sol.strategy.assign(g.size(), -1);
  }

  // attractor of `target` for `player` within `alive`; records the player's
  // attracting moves into `strat`
  std::vector<bool> attractor(Player player, const std::vector<bool>& target,
                              const std::vector<bool>& alive,
                              std::vector<int>& strat) {
    std::vector<bool> attr = target;
    std::vector<int> queue;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (attr[v] && alive[v]) queue.push_back(static_cast<int>(v));
    // count of alive successors not yet attracted, for opponent positions
    std::vector<int> pending(g.size(), 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!alive[v]) continue;
      int c = 0;
      for (int w : g.edges[v])
        if (alive[static_cast<std::size_t>(w)]) ++c;
      pending[v] = c;
    }
    // predecessor lists on demand
    std::vector<std::vector<int>> preds(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!alive[v]) continue;
      for (int w : g.edges[v])
        if (alive[static_cast<std::size_t>(w)])
          preds[static_cast<std::size_t>(w)].push_back(static_cast<int>(v));
    }
    // opponent positions with no alive successors are attracted immediately
    for (std::size_t v = 0; v < g.size(); ++v)
      if (alive[v] && !attr[v] && g.owner[v] != player && pending[v] == 0) {
        attr[v] = true;
        queue.push_back(static_cast<int>(v));
      }
    while (!queue.empty()) {
      int w = queue.back();
      queue.pop_back();
      for (int v : preds[static_cast<std::size_t>(w)]) {
        auto vv = static_cast<std::size_t>(v);
        if (attr[vv]) continue;
        if (g.owner[vv] == player) {
          attr[vv] = true;
          strat[vv] = w;
          queue.push_back(v);
        } else if (--pending[vv] == 0) {
          attr[vv] = true;
          queue.push_back(v);
        }
      }
    }
    return attr;
  }

  void run(std::vector<bool> alive) {
    int count = 0, d = -1;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (alive[v]) {
        ++count;
        d = std::max(d, g.priority[v]);
      }
    if (count == 0) return;
    Player player = d % 2 == 0 ? Player::Eva : Player::Adam;
    std::vector<bool> top(g.size(), false);
    for (std::size_t v = 0; v < g.size(); ++v)
      if (alive[v] && g.priority[v] == d) top[v] = true;
    std::vector<int> attr_strat(g.size(), -1);
    std::vector<bool> A = attractor(player, top, alive, attr_strat);
    for (std::size_t v = 0; v < g.size(); ++v) A[v] = A[v] && alive[v];
    std::vector<bool> rest = alive;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (A[v]) rest[v] = false;
    run(rest);
    bool opponent_wins_some = false;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (rest[v] && sol.winner[v] != player) opponent_wins_some = true;
    if (!opponent_wins_some) {
      // player wins the whole of `alive`
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (!alive[v]) continue;
        if (A[v]) {
          sol.winner[v] = player;
          if (g.owner[v] == player) {
            if (top[v]) {
              // inside the top class: any move staying alive keeps the max
              // priority recurring in the player's favor
              sol.strategy[v] = -1;
              for (int w : g.edges[v])
                if (alive[static_cast<std::size_t>(w)]) {
                  sol.strategy[v] = w;
                  break;
                }
            } else {
              sol.strategy[v] = attr_strat[v];
            }
          }
        }
        // positions in `rest` keep winner/strategy from the recursion
      }
      return;
    }
    std::vector<bool> opp_region(g.size(), false);
    for (std::size_t v = 0; v < g.size(); ++v)
      if (rest[v] && sol.winner[v] != player) opp_region[v] = true;
    std::vector<int> opp_strat(g.size(), -1);
    std::vector<bool> B = attractor(opponent(player), opp_region, alive, opp_strat);
    for (std::size_t v = 0; v < g.size(); ++v) B[v] = B[v] && alive[v];
    std::vector<bool> rest2 = alive;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (B[v]) rest2[v] = false;
    // solve the remainder afresh
    run(rest2);
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!alive[v] || !B[v]) continue;
      sol.winner[v] = opponent(player);
      if (g.owner[v] == opponent(player) && !opp_region[v])
        sol.strategy[v] = opp_strat[v];
      // strategies inside opp_region were set by the inner recursion
    }
  }
};

}  // namespace

GameSolution solve(const ParityGame& g) {
  // a stuck owner loses: model that as a self-loop of the losing parity, which
  // also keeps every subgame total (the attractor rules rely on totality)
  ParityGame total = g;
  bool changed = false;
  for (std::size_t v = 0; v < total.size(); ++v)
    if (total.edges[v].empty()) {
      total.edges[v].push_back(static_cast<int>(v));
      total.priority[v] = total.owner[v] == Player::Eva ? 1 : 0;
      changed = true;
    }
  Zielonka z(changed ? total : g);
  z.run(std::vector<bool>(g.size(), true));
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.edges[v].empty()) z.sol.strategy[v] = -1;  // no real move exists
  return z.sol;
}

bool model_check_via_game(const KripkeModel& m, const std::string& state,
                          const Formula& f) {
  Formula wn = make_well_named(f);
  ParityGame g = build_game(m, wn);
  GameSolution sol = solve(g);
  // the root formula is the first closure element
  int pos = g.position(m.state_index(state), 0);
  return sol.winner[static_cast<std::size_t>(pos)] == Player::Eva;
}

std::string dump_game(const ParityGame& g) {
  std::ostringstream out;
  out << "positions: " << g.size() << "\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    int s = g.state_of(static_cast<int>(v));
    int c = g.cl_of(static_cast<int>(v));
    out << "pos " << v << " state=" << g.model->states()[static_cast<std::size_t>(s)]
        << " owner=" << (g.owner[v] == Player::Eva ? "Eva" : "Adam")
        << " priority=" << g.priority[v]
        << " formula=" << print(g.cl[static_cast<std::size_t>(c)]) << "\n";
  }
  for (std::size_t v = 0; v < g.size(); ++v)
    for (int w : g.edges[v]) out << "edge " << v << " -> " << w << "\n";
  return out.str();
}

}  // namespace mucalc
