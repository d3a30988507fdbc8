#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "mucalc/formula.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/model.hpp"
#include "mucalc/parser.hpp"

using namespace mucalc;

namespace {

std::set<std::string> alpha_set(const std::vector<Formula>& fs) {
  std::set<std::string> out;
  for (auto& f : fs) out.insert(f.alpha_key());
  return out;
}

}  // namespace

TEST_CASE("parse basics") {
  Formula f = parse("mu z. x \\/ <a> z");
  CHECK(f.kind() == Kind::Mu);
  CHECK(f.name() == "z");
  CHECK(f.body().kind() == Kind::Or);
  CHECK(f.body().left() == Formula::var("x"));
  CHECK(f.body().right() == Formula::dia("a", Formula::var("z")));

  // binders yield priority: the conjunction belongs to the body
  Formula g = parse("mu x. phi /\\ psi");
  CHECK(g.kind() == Kind::Mu);
  CHECK(g.body().kind() == Kind::And);

  CHECK_THROWS_AS(parse("mu z. ~z"), Error);
  CHECK_THROWS_AS(parse("mu z."), Error);
  CHECK_THROWS_AS(parse("x \\/"), Error);
  CHECK_THROWS_AS(parse("x y"), Error);
  CHECK_THROWS_AS(parse("x#b"), Error);  // reserved marker
  CHECK(parse("x#b", ParseOptions{true}) == Formula::var("x#b"));
}

TEST_CASE("precedence") {
  CHECK(parse("a /\\ b \\/ c") ==
        Formula::disj(Formula::conj(Formula::var("a"), Formula::var("b")),
                      Formula::var("c")));
  CHECK(parse("<a> x /\\ y") ==
        Formula::conj(Formula::dia("a", Formula::var("x")), Formula::var("y")));
  CHECK(parse("[a] x \\/ y") ==
        Formula::disj(Formula::box("a", Formula::var("x")), Formula::var("y")));
}

TEST_CASE("general negation expands to negation normal form") {
  ParseResult r = parse_formula("~(p /\\ <a> q)");
  CHECK(r.expanded_negation);
  CHECK(r.formula == parse("~p \\/ [a] ~q"));
  ParseResult v = parse_formula("~p");
  CHECK_FALSE(v.expanded_negation);
  CHECK(v.formula == Formula::neg_var("p"));
}

TEST_CASE("print examples") {
  CHECK(print(Formula::mu("z", Formula::disj(Formula::var("x"),
                                             Formula::dia("a", Formula::var("z"))))) ==
        "mu z. x \\/ <a> z");
  CHECK(print(Formula::top()) == "true");
  CHECK(print(Formula::box("a", Formula::bot())) == "[a] false");
}

TEST_CASE("print/parse round trip on random formulas") {
  std::mt19937_64 rng(7);
  FormulaGenOptions opts;
  opts.max_depth = 7;
  opts.actions = {"a", "b"};
  opts.vars = {"x", "y", "w"};
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, opts);
    CHECK(parse(print(f)) == f);
  }
}

TEST_CASE("binding structure") {
  CHECK(free_vars(parse("mu z. x \\/ <a> z")) == std::set<std::string>{"x"});
  CHECK(bound_vars(parse("mu z. nu w. z /\\ w")) ==
        std::set<std::string>{"z", "w"});
  CHECK(is_positive_in(parse("~y \\/ x"), "x"));
  CHECK_FALSE(is_positive_in(parse("~y \\/ x"), "y"));
  CHECK(fresh_name("z", {"z", "z1"}) == "z2");
}

TEST_CASE("substitution") {
  // simultaneous replacement
  CHECK(apply_subst(parse("x \\/ y"), Substitution::single("x", parse("y"))) ==
        parse("y \\/ y"));
  Substitution swap({{"x", parse("y")}, {"y", parse("x")}});
  CHECK(apply_subst(parse("x /\\ y"), swap) == parse("y /\\ x"));

  // capture avoided by renaming the binder
  Formula g = apply_subst(parse("mu z. x \\/ <a> z"),
                          Substitution::single("x", parse("z")));
  CHECK(g.kind() == Kind::Mu);
  CHECK(g.name() != "z");
  CHECK(g.body().left() == Formula::var("z"));
  CHECK(g.body().right() == Formula::dia("a", Formula::var(g.name())));

  // identity substitution
  Formula f = parse("mu z. x \\/ <a> z");
  CHECK(apply_subst(f, Substitution()) == f);

  // substituting into a negated occurrence dualizes the replacement
  CHECK(apply_subst(parse("~x"), Substitution::single("x", parse("<a> y"))) ==
        parse("[a] ~y"));
}

TEST_CASE("substitution composition") {
  Substitution s1 = Substitution::single("x", parse("<a> q"));
  Substitution s2 = Substitution::single("q", parse("false"));
  Substitution c = compose_subst(s1, s2);
  REQUIRE(c.items().size() == 1);
  CHECK(c.items()[0].first == "x");
  CHECK(c.items()[0].second == parse("<a> false"));

  CHECK(compose_subst(s1, Substitution()).items() == s1.items());
  CHECK(compose_subst(Substitution(), s2).empty());
}

TEST_CASE("well-naming") {
  Formula f = parse("(mu z. <a> z) /\\ (mu z. [a] z)");
  CHECK_FALSE(is_well_named(f));
  Formula g = make_well_named(f);
  CHECK(is_well_named(g));
  CHECK(g.right().name() != g.left().name());
  CHECK(g.alpha_key() == f.alpha_key());

  Formula clash = parse("z /\\ mu z. <a> z");
  Formula fixed = make_well_named(clash);
  CHECK(is_well_named(fixed));
  CHECK(fixed.left() == Formula::var("z"));
  CHECK(fixed.right().name() != "z");

  Formula already = parse("mu z. x \\/ <a> z");
  CHECK(make_well_named(already) == already);
}

TEST_CASE("standard contexts") {
  Formula f = parse("mu z. x \\/ <a> z");
  // body occurrence: reinstall the single binder
  Substitution ctx = standard_context(f, {0});
  REQUIRE(ctx.items().size() == 1);
  CHECK(ctx.items()[0].first == "z");
  CHECK(ctx.items()[0].second == f);

  // root occurrence: no bound variables free
  CHECK(standard_context(f, {}).empty());

  // nested binders, inner context before outer
  Formula g = parse("mu z1. nu z2. z2 /\\ z1");
  auto chain = standard_context_chain(g, {0, 0});
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].first == "z2");
  CHECK(chain[0].second == parse("nu z2. z2 /\\ z1"));
  CHECK(chain[1].first == "z1");
  CHECK(chain[1].second == g);
  Substitution ctx2 = standard_context(g, {0, 0});
  Formula via_chain = subformula_at(g, {0, 0});
  for (auto& [v, repl] : chain)
    via_chain = apply_subst(via_chain, Substitution::single(v, repl));
  CHECK(apply_subst(subformula_at(g, {0, 0}), ctx2) == via_chain);
}

TEST_CASE("closure examples") {
  Formula f = parse("mu z. x \\/ <a> z");
  std::set<std::string> got = alpha_set(closure(f));
  std::set<std::string> want = {
      f.alpha_key(),
      parse("x \\/ <a> (mu z. x \\/ <a> z)").alpha_key(),
      parse("x").alpha_key(),
      parse("<a> (mu z. x \\/ <a> z)").alpha_key(),
  };
  CHECK(got == want);

  CHECK(alpha_set(closure(parse("x"))) ==
        std::set<std::string>{parse("x").alpha_key()});

  std::set<std::string> got2 = alpha_set(closure(parse("<a> x /\\ y")));
  std::set<std::string> want2 = {parse("<a> x /\\ y").alpha_key(),
                                 parse("<a> x").alpha_key(), parse("x").alpha_key(),
                                 parse("y").alpha_key()};
  CHECK(got2 == want2);
}

TEST_CASE("closure: standard-context and rule computations coincide") {
  std::mt19937_64 rng(11);
  FormulaGenOptions opts;
  opts.max_depth = 6;
  opts.actions = {"a", "b"};
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, opts);
    REQUIRE(is_well_named(f));
    auto a = closure(f);
    auto b = closure_by_rules(f);
    CHECK(alpha_set(a) == alpha_set(b));
    CHECK(a.size() <= f.size());  // |CL| bounded by subformula occurrences
  }
}

TEST_CASE("closure commutes with fresh substitution") {
  std::mt19937_64 rng(13);
  FormulaGenOptions opts;
  opts.max_depth = 5;
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, opts);
    auto fv = free_vars(f);
    if (fv.empty()) continue;
    std::string x = *fv.begin();
    Formula gamma = Formula::var(fresh_name("g", all_names(f)));
    Substitution s = Substitution::single(x, gamma);
    std::set<std::string> lhs = alpha_set(closure(apply_subst(f, s)));
    std::set<std::string> rhs;
    for (auto& psi : closure(f)) rhs.insert(apply_subst(psi, s).alpha_key());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("substitution with a fresh variable preserves connective counts") {
  std::mt19937_64 rng(17);
  FormulaGenOptions opts;
  opts.max_depth = 6;
  auto count_kinds = [](const Formula& f) {
    std::map<Kind, int> c;
    std::function<void(const Formula&)> rec = [&](const Formula& g) {
      if (!is_leaf(g.kind())) c[g.kind()]++;
      if (g.node()->lhs) rec(g.left());
      if (g.node()->rhs) rec(g.right());
    };
    rec(f);
    return c;
  };
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, opts);
    auto fv = free_vars(f);
    if (fv.empty()) continue;
    Formula g = apply_subst(
        f, Substitution::single(*fv.begin(),
                                Formula::var(fresh_name("g", all_names(f)))));
    CHECK(count_kinds(f) == count_kinds(g));
  }
}

TEST_CASE("dualize") {
  CHECK(dualize(parse("p /\\ <a> (p /\\ q)")) == parse("~p \\/ [a] (~p \\/ ~q)"));
  CHECK(dualize(parse("mu z. x \\/ <a> z")) == parse("nu z. ~x /\\ [a] z"));

  std::mt19937_64 rng(19);
  FormulaGenOptions opts;
  opts.max_depth = 5;
  opts.vars = {"x", "y"};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, opts);
    CHECK(dualize(dualize(f)) == f);
  }

  // complement semantics on random models
  for (int i = 0; i < 100; ++i) {
    Formula f = random_formula(rng, opts);
    int n = 1 + static_cast<int>(rng() % 4);
    KripkeModel m = random_model(rng, n, {"a"}, {"x", "y"});
    CHECK(eval(m, dualize(f)) == (m.full() & ~eval(m, f)));
  }
}

TEST_CASE("occurrences and addresses") {
  Formula f = parse("x \\/ (mu x. <a> x)");
  auto all = occurrences_of(f, "x", false);
  auto free_only = occurrences_of(f, "x", true);
  CHECK(all.size() == 2);
  REQUIRE(free_only.size() == 1);
  CHECK(free_only[0] == OccAddress{0});
  CHECK(subformula_at(f, {1}) == parse("mu x. <a> x"));
  CHECK_THROWS_AS(subformula_at(f, {0, 0}), Error);
}
