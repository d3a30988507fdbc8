#include "mucalc/checker.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "mucalc/fragment.hpp"
#include "mucalc/game.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/transforms.hpp"

namespace mucalc {

namespace {

std::set<std::string> actions_in(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (is_modal(g.kind())) out.insert(g.name());
    if (g.node()->lhs) rec(g.left());
    if (g.node()->rhs) rec(g.right());
  };
  rec(f);
  return out;
}

// bit layout: relations (action-major, from-major), then valuations
KripkeModel model_from_bits(int n, const std::vector<std::string>& actions,
                            const std::vector<std::string>& props,
                            std::uint64_t bits) {
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
  KripkeModel m(states, actions);
  int bit = 0;
  for (auto& a : actions)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j, ++bit)
        if ((bits >> bit) & 1) m.add_edge(a, i, j);
  for (auto& p : props) {
    StateSet v = 0;
    for (int i = 0; i < n; ++i, ++bit)
      if ((bits >> bit) & 1) v |= StateSet{1} << i;
    m.set_valuation(p, v);
  }
  return m;
}

std::uint64_t permute_bits(int n, int num_actions, int num_props,
                           std::uint64_t bits, const std::vector<int>& perm) {
  std::uint64_t out = 0;
  int rel_bits = num_actions * n * n;
  for (int ai = 0; ai < num_actions; ++ai)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int src = ai * n * n + i * n + j;
        if ((bits >> src) & 1) {
          int dst = ai * n * n + perm[static_cast<std::size_t>(i)] * n +
                    perm[static_cast<std::size_t>(j)];
          out |= std::uint64_t{1} << dst;
        }
      }
  for (int pi = 0; pi < num_props; ++pi)
    for (int i = 0; i < n; ++i) {
      int src = rel_bits + pi * n + i;
      if ((bits >> src) & 1)
        out |= std::uint64_t{1}
               << (rel_bits + pi * n + perm[static_cast<std::size_t>(i)]);
    }
  return out;
}

bool canonical_under_permutations(int n, int num_actions, int num_props,
                                  std::uint64_t bits) {
  if (n < 2) return true;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  while (std::next_permutation(perm.begin(), perm.end()))
    if (permute_bits(n, num_actions, num_props, bits, perm) < bits) return false;
  return true;
}

}  // namespace

int exhaustive_limit(const std::set<std::string>& actions,
                     const std::set<std::string>& props, int max_states) {
  int limit = 0;
  for (int n = 1; n <= std::min(max_states, 3); ++n) {
    long long bits = static_cast<long long>(actions.size()) * n * n +
                     static_cast<long long>(props.size()) * n;
    if (bits > 22) break;
    limit = n;
  }
  return limit;
}

void enumerate_models(const std::set<std::string>& actions,
                      const std::set<std::string>& props, int max_states,
                      const std::function<bool(const KripkeModel&)>& fn) {
  std::vector<std::string> av(actions.begin(), actions.end());
  std::vector<std::string> pv(props.begin(), props.end());
  int limit = exhaustive_limit(actions, props, max_states);
  for (int n = 1; n <= limit; ++n) {
    int bits = static_cast<int>(av.size()) * n * n + static_cast<int>(pv.size()) * n;
    std::uint64_t total = std::uint64_t{1} << bits;
    for (std::uint64_t b = 0; b < total; ++b) {
      if (!canonical_under_permutations(n, static_cast<int>(av.size()),
                                        static_cast<int>(pv.size()), b))
        continue;
      if (!fn(model_from_bits(n, av, pv, b))) return;
    }
  }
}

namespace {

void verify_witness(const KripkeModel& m, const std::string& s, const Formula& f1,
                    const Formula& f2) {
  bool e1 = eval_at(m, s, f1), e2 = eval_at(m, s, f2);
  bool g1 = model_check_via_game(m, s, f1), g2 = model_check_via_game(m, s, f2);
  if (e1 == e2 || g1 != e1 || g2 != e2)
    throw Error("internal: witness rejected by backend cross-check");
}

}  // namespace

DistinguishResult find_distinguishing_model(const Formula& f1, const Formula& f2,
                                            const SearchBudget& budget) {
  budget.validate();
  DistinguishResult res;
  if (f1 == f2) {
    res.exhausted_bound = exhaustive_limit({}, {}, budget.max_states);
    return res;
  }
  std::set<std::string> actions = actions_in(f1);
  for (auto& a : actions_in(f2)) actions.insert(a);
  std::set<std::string> props = free_vars(f1);
  for (auto& p : free_vars(f2)) props.insert(p);
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(budget.time_limit_ms);
  auto out_of_time = [&] { return std::chrono::steady_clock::now() > deadline; };

  int seen_size = 0;
  bool stopped = false;
  enumerate_models(actions, props, budget.max_states, [&](const KripkeModel& m) {
    if (out_of_time()) {
      stopped = true;
      res.timed_out = true;
      return false;
    }
    if (m.num_states() > seen_size) {
      res.exhausted_bound = seen_size;  // previous size fully done
      seen_size = m.num_states();
    }
    StateSet d = eval(m, f1) ^ eval(m, f2);
    if (d) {
      for (int i = 0; i < m.num_states(); ++i)
        if ((d >> i) & 1) {
          res.model = m;
          res.state = m.states()[static_cast<std::size_t>(i)];
          break;
        }
      stopped = true;
      return false;
    }
    return true;
  });
  if (res.model) {
    verify_witness(*res.model, res.state, f1, f2);
    return res;
  }
  if (!stopped) res.exhausted_bound = seen_size;  // final size completed too
  if (res.timed_out || res.model) return res;

  // random tier above the exhaustive limit
  std::mt19937_64 rng(budget.seed);
  std::vector<std::string> av(actions.begin(), actions.end());
  std::vector<std::string> pv(props.begin(), props.end());
  for (int n = res.exhausted_bound + 1; n <= budget.max_states; ++n) {
    for (int k = 0; k < budget.samples; ++k) {
      if (out_of_time()) {
        res.timed_out = true;
        return res;
      }
      KripkeModel m = random_model(rng, n, av, pv);
      StateSet d = eval(m, f1) ^ eval(m, f2);
      if (d) {
        for (int i = 0; i < m.num_states(); ++i)
          if ((d >> i) & 1) {
            res.model = m;
            res.state = m.states()[static_cast<std::size_t>(i)];
            verify_witness(m, res.state, f1, f2);
            return res;
          }
      }
    }
  }
  return res;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::InC0: return "in-C0";
    case VerdictKind::InC1: return "in-C1";
    case VerdictKind::EquivalentToNormalFormUpToBound:
      return "equivalent-to-normal-form-up-to-bound";
    case VerdictKind::NotContinuous: return "not-continuous";
    case VerdictKind::Exhausted: return "exhausted";
  }
  return "?";
}

Verdict check_continuity(const Formula& f, const std::string& x,
                         const SearchBudget& budget) {
  budget.validate();
  if (in_C0(f, {x})) return Verdict{VerdictKind::InC0, Formula(), 0, {}, ""};
  if (in_C(f, {x})) return Verdict{VerdictKind::InC1, Formula(), 0, {}, ""};
  Formula nf = continuity_normal_form(f, x);
  DistinguishResult res = find_distinguishing_model(f, nf, budget);
  if (res.model)
    return Verdict{VerdictKind::NotContinuous, nf, res.exhausted_bound,
                   std::move(res.model), res.state};
  std::set<std::string> actions = actions_in(f);
  for (auto& a : actions_in(nf)) actions.insert(a);
  std::set<std::string> props = free_vars(f);
  for (auto& p : free_vars(nf)) props.insert(p);
  int tier = exhaustive_limit(actions, props, budget.max_states);
  if (!res.timed_out && res.exhausted_bound >= tier)
    return Verdict{VerdictKind::EquivalentToNormalFormUpToBound, nf,
                   res.exhausted_bound, {}, ""};
  return Verdict{VerdictKind::Exhausted, nf, res.exhausted_bound, {}, ""};
}

}  // namespace mucalc
