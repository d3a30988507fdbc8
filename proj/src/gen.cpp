#include "mucalc/gen.hpp"

namespace mucalc {

namespace {

struct GenState {
  std::mt19937_64& rng;
  const FormulaGenOptions& opts;
  std::vector<std::string> scope;  // binder variables in scope (positive)
  int next_binder = 0;

  int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

  std::string binder_name() {
    for (;;) {
      std::string cand = "b" + std::to_string(next_binder++);
      bool clash = false;
      for (auto& v : opts.vars) clash = clash || v == cand;
      if (!clash) return cand;
    }
  }

  Formula leaf() {
    int total = static_cast<int>(opts.vars.size() + scope.size()) + 2;
    int k = pick(total * 2);
    if (k == 0) return Formula::top();
    if (k == 1) return Formula::bot();
    k = pick(static_cast<int>(opts.vars.size() + scope.size()));
    std::string v = k < static_cast<int>(opts.vars.size())
                        ? opts.vars[static_cast<std::size_t>(k)]
                        : scope[static_cast<std::size_t>(k - opts.vars.size())];
    bool negatable = k < static_cast<int>(opts.vars.size()) &&
                     !opts.positive_only.count(v);
    if (negatable && pick(4) == 0) return Formula::neg_var(v);
    return Formula::var(v);
  }

  Formula gen(int depth) {
    if (depth <= 0) return leaf();
    int choices = opts.allow_binders ? 7 : 5;
    switch (pick(choices)) {
      case 0:
        return leaf();
      case 1:
        return Formula::conj(gen(depth - 1), gen(depth - 1));
      case 2:
        return Formula::disj(gen(depth - 1), gen(depth - 1));
      case 3:
        return Formula::dia(opts.actions[static_cast<std::size_t>(
                                pick(static_cast<int>(opts.actions.size())))],
                            gen(depth - 1));
      case 4:
        return Formula::box(opts.actions[static_cast<std::size_t>(
                                pick(static_cast<int>(opts.actions.size())))],
                            gen(depth - 1));
      default: {
        std::string z = binder_name();
        scope.push_back(z);
        Formula body = gen(depth - 1);
        scope.pop_back();
        return pick(2) == 0 ? Formula::mu(z, body) : Formula::nu(z, body);
      }
    }
  }
};

}  // namespace

Formula random_formula(std::mt19937_64& rng, const FormulaGenOptions& opts) {
  if (opts.actions.empty() || opts.vars.empty())
    throw Error("random_formula: need at least one action and one variable");
  GenState st{rng, opts, {}, 0};
  return st.gen(opts.max_depth);
}

KripkeModel random_model(std::mt19937_64& rng, int num_states,
                         const std::vector<std::string>& actions,
                         const std::vector<std::string>& props) {
  std::vector<std::string> states;
  for (int i = 0; i < num_states; ++i) states.push_back("s" + std::to_string(i));
  KripkeModel m(states, actions);
  static const double densities[] = {0.15, 0.3, 0.5, 0.75};
  for (auto& a : actions) {
    double d = densities[rng() % 4];
    std::uint64_t threshold =
        static_cast<std::uint64_t>(d * 18446744073709551615.0);
    for (int i = 0; i < num_states; ++i)
      for (int j = 0; j < num_states; ++j)
        if (rng() <= threshold) m.add_edge(a, i, j);
  }
  for (auto& p : props) {
    StateSet v = 0;
    for (int i = 0; i < num_states; ++i)
      if (rng() & 1) v |= StateSet{1} << i;
    m.set_valuation(p, v);
  }
  return m;
}

}  // namespace mucalc
