#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mucalc/fragment.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/parser.hpp"

using namespace mucalc;

namespace {

OccurrenceClass classify_at(const Formula& f, const OccAddress& occ,
                            const std::string& x) {
  return classify_occurrence(build_graph(f), occ, x);
}

}  // namespace

TEST_CASE("graph structure") {
  FormulaGraph g = build_graph(parse("mu z. <a> z"));
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.nodes[0].kind == Kind::Mu);
  CHECK(g.nodes[2].kind == Kind::Var);
  CHECK(g.nodes[2].back_edge == 0);

  FormulaGraph single = build_graph(parse("x"));
  REQUIRE(single.nodes.size() == 1);
  CHECK(single.nodes[0].back_edge == -1);  // free occurrence: no back edge

  // two binders, two back edges
  FormulaGraph fig = build_graph(
      parse("(mu z1. y0 /\\ (nu z0. z0 /\\ [a] z1)) \\/ (<a> y0 /\\ y1)"));
  int back_edges = 0;
  for (auto& n : fig.nodes)
    if (n.back_edge >= 0) ++back_edges;
  CHECK(back_edges == 2);
}

TEST_CASE("occurrence classification") {
  Formula fig = parse("(mu z1. y0 /\\ (nu z0. z0 /\\ [a] z1)) \\/ (<a> y0 /\\ y1)");
  auto y0 = occurrences_of(fig, "y0", true);
  REQUIRE(y0.size() == 2);
  CHECK(classify_at(fig, y0[0], "y0") == OccurrenceClass::VeryBad);
  CHECK(classify_at(fig, y0[1], "y0") == OccurrenceClass::NotBad);
  auto z1 = occurrences_of(fig, "z1", false);
  REQUIRE(z1.size() == 1);  // the single bound leaf under [a]
  CHECK(classify_at(fig, z1[0], "z1") == OccurrenceClass::Boxed);
  auto y1 = occurrences_of(fig, "y1", true);
  REQUIRE(y1.size() == 1);
  CHECK(classify_at(fig, y1[0], "y1") == OccurrenceClass::NotBad);

  // bad through the back edge, simple path unboxed
  Formula f = parse("mu z. x \\/ [a] z");
  auto occ = occurrences_of(f, "x", true);
  REQUIRE(occ.size() == 1);
  CHECK(classify_at(f, occ[0], "x") == OccurrenceClass::VeryBad);

  CHECK(classify_at(parse("[a] x"), {0}, "x") == OccurrenceClass::Boxed);
  CHECK(classify_at(parse("<a> x"), {0}, "x") == OccurrenceClass::NotBad);
}

TEST_CASE("bound-variable occurrence inside a box is boxed") {
  Formula f = parse("(mu z1. y0 /\\ (nu z0. z0 /\\ [a] z1)) \\/ (<a> y0 /\\ y1)");
  // the z1 leaf sits under [a]
  OccAddress leaf = {0, 0, 1, 0, 1, 0};
  CHECK(subformula_at(f, leaf) == Formula::var("z1"));
  CHECK(classify_at(f, leaf, "z1") == OccurrenceClass::Boxed);
}

TEST_CASE("fragment membership") {
  CHECK(in_C(parse("mu z. x \\/ <a> z"), {"x"}));
  CHECK_FALSE(in_C(parse("mu z. x \\/ [a] z"), {"x"}));
  CHECK(in_C(parse("nu z. x /\\ <a> z"), {"x"}));
  CHECK(in_C(parse("[a] y"), {"x"}));  // x-free subformulas are unrestricted
  CHECK_FALSE(in_C(parse("~x"), {"x"}));

  CHECK(in_C0(parse("<a> x /\\ y"), {"x"}));
  CHECK_FALSE(in_C0(parse("nu z. x /\\ <a> z"), {"x"}));
  CHECK(in_C0(parse("mu z. x \\/ <a> z"), {"x"}));  // mu stays continuous
  CHECK_FALSE(in_C0(parse("mu z. x \\/ [a] z"), {"x"}));
  CHECK(in_C0(parse("nu z. y /\\ <a> z"), {"x"}));  // x-free

  CHECK_THROWS_AS(in_C(parse("mu x. <a> x"), {"x"}), Error);
}

TEST_CASE("almost-good") {
  CHECK(is_almost_good(parse("[a] x"), {"x"}));
  CHECK_FALSE(is_almost_good(parse("mu z. x \\/ [a] z"), {"x"}));
  CHECK(is_almost_good(parse("mu z. x \\/ <a> z"), {"x"}));
}

TEST_CASE("grammar membership equals absence of bad occurrences") {
  std::mt19937_64 rng(23);
  FormulaGenOptions opts;
  opts.max_depth = 6;
  opts.actions = {"a", "b"};
  opts.vars = {"x", "y", "w"};
  opts.positive_only = {"x", "y"};
  std::set<std::string> X = {"x", "y"};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, opts);
    FormulaGraph g = build_graph(f);
    bool any_bad = false;
    for (auto& x : X)
      for (auto& occ : occurrences_of(f, x, true))
        if (classify_occurrence(g, occ, x) != OccurrenceClass::NotBad)
          any_bad = true;
    CHECK(in_C(f, X) == !any_bad);
  }
}

TEST_CASE("fragment properties") {
  std::mt19937_64 rng(29);
  FormulaGenOptions opts;
  opts.max_depth = 5;
  opts.vars = {"x", "y"};
  opts.positive_only = {"x", "y"};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, opts);
    // monotone in the variable set
    if (in_C(f, {"x", "y"})) {
      CHECK(in_C(f, {"x"}));
      CHECK(in_C(f, {"y"}));
    }
    // the fixpoint-free fragment is contained in the full one
    if (in_C0(f, {"x"})) CHECK(in_C(f, {"x"}));
  }
}

TEST_CASE("classification is stable under renaming of bound variables") {
  std::mt19937_64 rng(31);
  FormulaGenOptions opts;
  opts.max_depth = 5;
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, opts);
    Formula g = make_well_named(f);
    CHECK(is_almost_good(f, {"x"}) == is_almost_good(g, {"x"}));
    CHECK(in_C(f, {"x"}) == in_C(g, {"x"}));
    CHECK(in_C0(f, {"x"}) == in_C0(g, {"x"}));
  }
}
