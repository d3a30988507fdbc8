#include "mucalc/selftest.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "mucalc/checker.hpp"
#include "mucalc/fragment.hpp"
#include "mucalc/game.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/model.hpp"
#include "mucalc/parser.hpp"
#include "mucalc/transforms.hpp"

namespace mucalc::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

struct Reporter {
  std::ostream& out;
  bool all_ok = true;

  void report(int number, const std::string& name, bool ok,
              const std::string& detail, Clock::time_point start) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  Clock::now() - start)
                  .count();
    out << (ok ? "PASS" : "FAIL") << "  " << number << ". " << name << " ("
        << detail << ", " << ms << " ms)\n";
    all_ok = all_ok && ok;
  }
};

std::set<std::string> ids_of(const KripkeModel& m, StateSet s) {
  auto v = states_of(m, s);
  return {v.begin(), v.end()};
}

// 1. in_C vs bad-occurrence classification on random formulas.
void criterion1(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 1);
  FormulaGenOptions opts;
  opts.max_depth = 8;
  opts.actions = {"a", "b"};
  opts.vars = {"x", "y", "w"};
  opts.positive_only = {"x", "y", "w"};
  std::set<std::string> X = {"x", "y", "w"};
  int mismatches = 0;
  const int kRuns = 10000;
  for (int i = 0; i < kRuns; ++i) {
    Formula f = random_formula(rng, opts);
    bool grammar = in_C(f, X);
    FormulaGraph g = build_graph(f);
    bool no_bad = true;
    for (auto& x : X)
      for (auto& occ : occurrences_of(f, x, true))
        if (classify_occurrence(g, occ, x) != OccurrenceClass::NotBad)
          no_bad = false;
    if (grammar != no_bad) ++mismatches;
  }
  rep.report(1, "grammar/digraph agreement on 10,000 formulas", mismatches == 0,
             std::to_string(mismatches) + " mismatches", start);
}

// 2. Occurrence classification on the two-back-edge example formula.
void criterion2(Reporter& rep) {
  auto start = Clock::now();
  Formula f = parse("(mu z1. y0 /\\ (nu z0. z0 /\\ [a] z1)) \\/ (<a> y0 /\\ y1)");
  FormulaGraph g = build_graph(f);
  auto y0 = occurrences_of(f, "y0", true);
  auto y1 = occurrences_of(f, "y1", true);
  auto z1 = occurrences_of(f, "z1", false);
  bool ok = y0.size() == 2 && y1.size() == 1 && z1.size() == 1 &&
            classify_occurrence(g, y0[0], "y0") == OccurrenceClass::VeryBad &&
            classify_occurrence(g, y0[1], "y0") == OccurrenceClass::NotBad &&
            classify_occurrence(g, z1[0], "z1") == OccurrenceClass::Boxed &&
            classify_occurrence(g, y1[0], "y1") == OccurrenceClass::NotBad;
  rep.report(2, "occurrence classes of the reference formula", ok,
             "very-bad/not-bad/boxed/not-bad expected", start);
}

// 3. Golden boxing output (up to renaming of bound variables).
void criterion3(Reporter& rep) {
  auto start = Clock::now();
  Formula input = parse("x \\/ mu z. x \\/ z \\/ [a](x /\\ z)");
  Formula expected = parse(
      "x \\/ mu z. x \\/ z \\/ [a](x /\\ mu z#b. mu z. x \\/ z \\/ [a](x /\\ z#b))",
      ParseOptions{true});
  Formula got = boxing(input, {"x"});
  bool ok = got.alpha_key() == expected.alpha_key() && is_almost_good(got, {"x"});
  rep.report(3, "boxing golden output", ok,
             ok ? "alpha-equivalent and almost-good" : "got: " + print(got), start);
}

// 4. Semantic equivalence of boxing on all small models.
void criterion4(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 4);
  FormulaGenOptions opts;
  opts.max_depth = 5;
  opts.actions = {"a"};
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  int mismatches = 0;
  int nontrivial = 0;
  const int kRuns = 1000;
  const int kNontrivialQuota = 100;  // rewrites that actually split a binder
  const int kSampleCap = 100000;
  for (int i = 0; i < kSampleCap && (i < kRuns || nontrivial < kNontrivialQuota);
       ++i) {
    Formula f = random_formula(rng, opts);
    Formula boxed = boxing(f, {"x"});
    if (boxed == f) continue;  // identity rewrite: trivially equivalent
    ++nontrivial;
    std::set<std::string> props = free_vars(f);
    std::set<std::string> actions;
    std::function<void(const Formula&)> acts = [&](const Formula& g) {
      if (is_modal(g.kind())) actions.insert(g.name());
      if (g.node()->lhs) acts(g.left());
      if (g.node()->rhs) acts(g.right());
    };
    acts(f);
    bool bad = false;
    enumerate_models(actions, props, 3, [&](const KripkeModel& m) {
      if (eval(m, f) != eval(m, boxed)) {
        bad = true;
        return false;
      }
      return true;
    });
    if (bad) ++mismatches;
  }
  rep.report(4, "boxing preserves semantics on every model with <= 3 states",
             mismatches == 0 && nontrivial >= kNontrivialQuota,
             std::to_string(mismatches) + " mismatches, " +
                 std::to_string(nontrivial) + " nontrivial rewrites",
             start);
}

// 5. Normal form lands in C(x); lift round-trips.
void criterion5(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 5);
  FormulaGenOptions opts;
  opts.max_depth = 6;
  opts.actions = {"a", "b"};
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  int failures = 0;
  const int kRuns = 10000;
  for (int i = 0; i < kRuns; ++i) {
    Formula f = random_formula(rng, opts);
    Formula nf = continuity_normal_form(f, "x");
    if (!in_C(nf, {"x"})) ++failures;
    std::string xb = boxed_name(f, "x");
    Formula back = apply_subst(lift(f, "x", xb),
                               Substitution::single(xb, Formula::var("x")));
    if (!(back == f)) ++failures;
  }
  rep.report(5, "normal form in C(x) and lift round-trip on 10,000 formulas",
             failures == 0, std::to_string(failures) + " failures", start);
}

// 6. Parity game winner equals denotational truth.
void criterion6(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 6);
  FormulaGenOptions opts;
  opts.max_depth = 6;
  opts.actions = {"a", "b"};
  opts.vars = {"x", "y"};
  int mismatches = 0;
  const int kRuns = 1000;
  for (int i = 0; i < kRuns; ++i) {
    int n = 1 + static_cast<int>(rng() % 6);
    KripkeModel m = random_model(rng, n, {"a", "b"}, {"x", "y"});
    Formula f = random_formula(rng, opts);
    const std::string& s = m.states()[rng() % m.states().size()];
    if (eval_at(m, s, f) != model_check_via_game(m, s, f)) ++mismatches;
  }
  rep.report(6, "game and denotational semantics agree on 1,000 instances",
             mismatches == 0, std::to_string(mismatches) + " mismatches", start);
}

// 7. Continuity pipeline verdicts on the four reference formulas.
void criterion7(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  SearchBudget budget;
  budget.max_states = 3;
  budget.samples = 500;
  budget.seed = seed + 7;
  budget.time_limit_ms = 5000;
  bool ok = true;
  std::string detail;
  auto expect = [&](const std::string& text, VerdictKind kind, int max_witness) {
    auto t0 = Clock::now();
    Verdict v = check_continuity(parse(text), "x", budget);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
                  .count();
    bool good = v.kind == kind && ms < 5000;
    if (kind == VerdictKind::NotContinuous)
      good = good && v.witness && v.witness->num_states() <= max_witness;
    if (!good) {
      ok = false;
      detail += text + " -> " + to_string(v.kind) + "; ";
    }
  };
  expect("<a> x", VerdictKind::InC0, 0);
  expect("nu z. x /\\ <a> z", VerdictKind::InC1, 0);
  expect("[a] x", VerdictKind::NotContinuous, 2);
  expect("mu z. x \\/ [a] z", VerdictKind::NotContinuous, 2);
  rep.report(7, "continuity pipeline classification", ok,
             ok ? "4 verdicts as expected" : detail, start);
}

// 8. Ordinal-sum closure ordinals on witness and random acceptable models.
void criterion8(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 8);
  int failures = 0;
  int acceptable_checked = 0;
  for (int m = 1; m <= 5; ++m)
    for (int n = 1; n <= 5; ++n) {
      Formula base = parse("q \\/ <a> x");
      Formula phi = totalize(base, "x");
      KripkeModel ma = chain_model(m, "q");
      KripkeModel mb = chain_model(n, "q");
      // sanity: the chain pins the closure ordinal of each summand
      if (closure_ordinal_on(ma, phi, "x") != m) ++failures;
      if (closure_ordinal_on(mb, phi, "x") != n) ++failures;
      SumFormulas sum = sum_formula(phi, phi, "p", "x");
      KripkeModel witness = sum_witness_model(ma, mb, "p");
      if (!is_acceptable(witness, sum.chi)) ++failures;
      if (closure_ordinal_on(witness, sum.Psi, "x") != m + n) ++failures;
      // random acceptable models: p-block of <= n states over a closed
      // complement of <= m states; psi must converge within m+n steps
      for (int k = 0; k < 8; ++k) {
        int ka = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
        int kb = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        KripkeModel rm = random_model(rng, ka + kb, {"a"}, {"q"});
        StateSet pset = 0;
        for (int i = ka; i < ka + kb; ++i) pset |= StateSet{1} << i;
        // close the complement: drop edges from non-p states into p states
        KripkeModel closed(rm.states(), rm.actions());
        for (int i = 0; i < rm.num_states(); ++i) {
          StateSet ss = rm.succ("a", i);
          if (!((pset >> i) & 1)) ss &= ~pset;
          for (int j = 0; j < rm.num_states(); ++j)
            if ((ss >> j) & 1) closed.add_edge("a", i, j);
        }
        for (auto& [q, v] : rm.valuation()) closed.set_valuation(q, v);
        closed.set_valuation("p", pset);
        if (!is_acceptable(closed, sum.chi)) {
          ++failures;  // construction should always be chi-acceptable
          continue;
        }
        ++acceptable_checked;
        if (closure_ordinal_on(closed, sum.psi, "x") > m + n) ++failures;
      }
    }
  rep.report(8,
             "ordinal sum: cl(Psi) = m+n on witnesses, psi converges on " +
                 std::to_string(acceptable_checked) + " acceptable models",
             failures == 0 && acceptable_checked == 200,
             std::to_string(failures) + " failures", start);
}

// 9. Staircase truncation approximants.
void criterion9(Reporter& rep) {
  auto start = Clock::now();
  Formula phi = parse("(nu z. <v> x /\\ <h> z) \\/ [v] false");
  int failures = 0;
  for (int n = 1; n <= 20; ++n) {
    KripkeModel m = ordinal_chain_model(n);
    auto trace = approximants(m, phi, "x");
    if (closure_ordinal_on(m, phi, "x") != n) ++failures;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      StateSet expect = k >= static_cast<std::size_t>(n)
                            ? m.full()
                            : (StateSet{1} << k) - 1;
      if (trace[k] != expect) ++failures;
    }
  }
  rep.report(9, "staircase approximants are initial segments, cl = n",
             failures == 0, std::to_string(failures) + " failures", start);
}

// 10. Bimodal-to-monomodal transfer of truth and approximants.
void criterion10(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 10);
  FormulaGenOptions opts;
  opts.max_depth = 4;
  opts.actions = {"h", "v"};
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  int mismatches = 0;
  const int kRuns = 500;
  for (int i = 0; i < kRuns; ++i) {
    int n = 1 + static_cast<int>(rng() % 5);
    KripkeModel m = random_model(rng, n, {"h", "v"}, {"x", "y"});
    Formula f = random_formula(rng, opts);
    Formula ft = thomason_translate(f);
    ThomasonModel tm = thomason_model(m);
    for (auto& s : m.states())
      if (eval_at(m, s, f) != eval_at(tm.model, tm.embedding[s], ft)) ++mismatches;
    auto trace = approximants(m, f, "x");
    auto trace_t = approximants(tm.model, ft, "x");
    if (trace.size() != trace_t.size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t k = 0; k < trace.size(); ++k) {
      std::set<std::string> embedded;
      for (auto& id : states_of(m, trace[k]))
        embedded.insert(tm.embedding[id]);
      if (embedded != ids_of(tm.model, trace_t[k])) ++mismatches;
    }
  }
  rep.report(10, "bimodal-to-monomodal truth and trace transfer on 500 models",
             mismatches == 0, std::to_string(mismatches) + " mismatches", start);
}

// 11. Bisimilar states agree on every formula.
void criterion11(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 11);
  FormulaGenOptions opts;
  opts.max_depth = 4;
  opts.actions = {"a", "b"};
  opts.vars = {"x", "y"};
  std::set<std::string> props = {"x", "y"};
  std::set<std::string> acts = {"a", "b"};
  int mismatches = 0;
  int pairs_checked = 0;
  const int kRuns = 200;
  for (int i = 0; i < kRuns; ++i) {
    int n1 = 1 + static_cast<int>(rng() % 4);
    KripkeModel m1 = random_model(rng, n1, {"a", "b"}, {"x", "y"});
    // half the runs compare a model against itself to guarantee coverage
    KripkeModel m2 = (i % 2 == 0)
                         ? m1
                         : random_model(rng, 1 + static_cast<int>(rng() % 4),
                                        {"a", "b"}, {"x", "y"});
    std::vector<std::pair<std::string, std::string>> related;
    for (auto& s1 : m1.states())
      for (auto& s2 : m2.states())
        if (bisimilar(m1, s1, m2, s2, props, acts)) related.emplace_back(s1, s2);
    if (related.empty()) continue;
    for (int k = 0; k < 50; ++k) {
      Formula f = random_formula(rng, opts);
      for (auto& [s1, s2] : related) {
        ++pairs_checked;
        if (eval_at(m1, s1, f) != eval_at(m2, s2, f)) ++mismatches;
      }
    }
  }
  rep.report(11,
             "bisimulation invariance (" + std::to_string(pairs_checked) +
                 " pair/formula checks)",
             mismatches == 0 && pairs_checked > 0,
             std::to_string(mismatches) + " mismatches", start);
}

// 12. Submodel translation: pointwise truth and stepwise approximants.
void criterion12(Reporter& rep, std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed + 12);
  FormulaGenOptions opts;
  opts.max_depth = 4;
  opts.actions = {"a"};
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  int mismatches = 0;
  int closed_cases = 0;
  const int kRuns = 500;
  for (int i = 0; i < kRuns; ++i) {
    int n = 1 + static_cast<int>(rng() % 5);
    KripkeModel m = random_model(rng, n, {"a"}, {"x", "y"});
    StateSet S = rng() & m.full();
    if (i % 2 == 1) {
      // forward-close S so the fast path gets exercised
      StateSet grow = S;
      for (;;) {
        StateSet next = grow;
        for (int s = 0; s < n; ++s)
          if ((grow >> s) & 1) next |= m.succ("a", s);
        if (next == grow) break;
        grow = next;
      }
      S = grow;
    }
    Formula f = random_formula(rng, opts);
    Formula tr = translate(f, submodel_scheme({"a"}));
    KripkeModel mv = variant(m, "p", S);
    KripkeModel sub = induced_submodel(m, S);
    // pointwise truth
    for (auto& s : m.states()) {
      bool inside = (S >> m.state_index(s)) & 1;
      bool lhs = eval_at(mv, s, tr);
      bool rhs = inside && eval_at(sub, s, f);
      if (lhs != rhs) ++mismatches;
    }
    // stepwise approximants
    auto ta = approximants(mv, tr, "x");
    auto tb = approximants(sub, f, "x");
    if (ta.size() != tb.size()) {
      ++mismatches;
    } else {
      for (std::size_t k = 0; k < ta.size(); ++k)
        if (ids_of(mv, ta[k]) != ids_of(sub, tb[k])) ++mismatches;
    }
    if (is_closed(m, S)) {
      ++closed_cases;
      Formula fast = Formula::conj(Formula::var("p"), f);
      auto fa = approximants(mv, fast, "x");
      if (fa.size() != tb.size()) {
        ++mismatches;
      } else {
        for (std::size_t k = 0; k < fa.size(); ++k)
          if (ids_of(mv, fa[k]) != ids_of(sub, tb[k])) ++mismatches;
      }
    }
  }
  rep.report(12,
             "submodel translation traces (" + std::to_string(closed_cases) +
                 " closed fast-path cases)",
             mismatches == 0 && closed_cases > 0,
             std::to_string(mismatches) + " mismatches", start);
}

}  // namespace

bool run_all(std::ostream& out, std::uint64_t seed) {
  Reporter rep{out};
  criterion1(rep, seed);
  criterion2(rep);
  criterion3(rep);
  criterion4(rep, seed);
  criterion5(rep, seed);
  criterion6(rep, seed);
  criterion7(rep, seed);
  criterion8(rep, seed);
  criterion9(rep);
  criterion10(rep, seed);
  criterion11(rep, seed);
  criterion12(rep, seed);
  out << (rep.all_ok ? "acceptance: all criteria passed\n"
                     : "acceptance: FAILURES present\n");
  return rep.all_ok;
}

}  // namespace mucalc::acceptance
