#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mucalc/fragment.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/model.hpp"
#include "mucalc/parser.hpp"
#include "mucalc/transforms.hpp"

using namespace mucalc;

namespace {

const ParseOptions kReserved{true};

Formula rparse(const std::string& s) { return parse(s, kReserved); }

}  // namespace

TEST_CASE("lift") {
  CHECK(lift(parse("[a] x"), "x") == rparse("[a] x#b"));
  CHECK(lift(parse("mu z. x \\/ [a] z"), "x") == parse("mu z. x \\/ [a] z"));
  CHECK(lift(parse("x /\\ [a] (x \\/ y)"), "x") == rparse("x /\\ [a] (x#b \\/ y)"));
  CHECK(boxed_name(parse("x"), "x") == "x#b");
  CHECK(boxed_name(rparse("x /\\ x#b"), "x") == "x#b2");
  CHECK_THROWS_AS(lift(parse("mu x. <a> x"), "x"), Error);
}

TEST_CASE("flatten") {
  CHECK(flatten(parse("[a] x"), "x") == parse("[a] false"));
  CHECK(flatten(parse("<a> x"), "x") == parse("<a> x"));
  CHECK(flatten(parse("mu z. x \\/ [a] z"), "x") == parse("mu z. x \\/ [a] z"));
}

TEST_CASE("boxing") {
  // golden example: the very-bad x under the box gets a split binder
  Formula in = parse("x \\/ mu z. x \\/ z \\/ [a] (x /\\ z)");
  Formula want = rparse(
      "x \\/ mu z. x \\/ z \\/ [a] (x /\\ mu z#b. mu z. x \\/ z \\/ [a] (x /\\ z#b))");
  Formula got = boxing(in, {"x"});
  CHECK(got.alpha_key() == want.alpha_key());
  CHECK(is_almost_good(got, {"x"}));

  CHECK(boxing(parse("<a> x"), {"x"}) == parse("<a> x"));

  Formula got2 = boxing(parse("mu z. x \\/ [a] z"), {"x"});
  Formula want2 = rparse("mu z. x \\/ [a] (mu z#b. mu z. x \\/ [a] z#b)");
  CHECK(got2.alpha_key() == want2.alpha_key());
  CHECK(is_almost_good(got2, {"x"}));
}

TEST_CASE("continuity normal form") {
  CHECK(continuity_normal_form(parse("<a> x"), "x") == parse("<a> x"));
  CHECK(continuity_normal_form(parse("[a] x"), "x") == parse("[a] false"));
  Formula got = continuity_normal_form(parse("mu z. x \\/ [a] z"), "x");
  Formula want = parse("mu z. x \\/ [a] (mu w. mu u. false \\/ [a] w)");
  CHECK(got.alpha_key() == want.alpha_key());
  CHECK(in_C(got, {"x"}));
}

TEST_CASE("translation schemes") {
  CHECK(submodel_scheme({"a"}).psi.at("a") == parse("p /\\ <a> (p /\\ q)"));
  CHECK(referee_scheme().psi.at("h") == parse("p /\\ <a> (p /\\ q)"));
  CHECK(referee_scheme().psi.at("v") == parse("p /\\ <a> (~p /\\ <a> (p /\\ q))"));
  CHECK(thomason_scheme().psi.at("v") ==
        parse("p /\\ <a> (~p /\\ <a> (~p /\\ <a> (p /\\ q)))"));
}

TEST_CASE("translate") {
  TranslationScheme th = thomason_scheme();
  CHECK(translate(parse("true"), th) == parse("p"));
  CHECK(translate(parse("<h> y"), th) == parse("p /\\ <a> (p /\\ (p /\\ y))"));
  CHECK(translate(parse("[h] y"), th) ==
        parse("p /\\ (~p \\/ [a] (~p \\/ (p /\\ y)))"));
  CHECK_THROWS_AS(translate(parse("p"), th), Error);         // p must be fresh
  CHECK_THROWS_AS(translate(parse("<w> y"), th), Error);     // unknown action

  // transparent variables skip the p-relativisation
  TranslationScheme sub = submodel_scheme({"a"});
  CHECK(translate(parse("<a> x"), sub, {"x"}) == parse("p /\\ <a> (p /\\ x)"));
  CHECK(translate(parse("<a> x"), sub) == parse("p /\\ <a> (p /\\ (p /\\ x))"));
}

TEST_CASE("thomason translation") {
  CHECK(thomason_translate(parse("true")) == parse("<a> [a] false"));
  CHECK(thomason_translate(parse("y")) == parse("<a> [a] false /\\ y"));
  CHECK(thomason_translate(parse("<h> y")) ==
        parse("<a> [a] false /\\ "
              "<a> (<a> [a] false /\\ (<a> [a] false /\\ y))"));

  // the staircase formula stays in the continuous fragment after translation
  Formula Phi = parse("(nu z. <v> x /\\ <h> z) \\/ [v] false");
  CHECK(in_C(thomason_translate(Phi), {"x"}));
}

TEST_CASE("master box") {
  CHECK(master_box(parse("p"), {"a"}) == parse("nu z. p /\\ [a] z"));
  Formula two = master_box(parse("p"), {"a", "b"});
  CHECK(free_vars(two) == std::set<std::string>{"p"});
  CHECK(two.kind() == Kind::Nu);

  // name clash with chi avoided
  Formula clash = master_box(parse("z"), {"a"});
  CHECK(clash.name() != "z");

  // total on every model for chi = true
  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    KripkeModel m = random_model(rng, 1 + static_cast<int>(rng() % 4), {"a"}, {});
    CHECK(eval(m, master_box(parse("true"), {"a"})) == m.full());
  }
}

TEST_CASE("sum construction shapes") {
  SumFormulas s = sum_formula(parse("q \\/ <a> x"), parse("<a> x"), "p");
  // chi = chi0 /\ chi1
  REQUIRE(s.chi.kind() == Kind::And);
  CHECK(s.chi.left() == parse("p \\/ ([a] ~p /\\ mu z. q \\/ <a> z)"));

  SumFormulas d = sum_formula(parse("<a> x"), parse("<a> x"), "p");
  CHECK(d.psi ==
        parse("(~p /\\ <a> x) \\/ ((p /\\ <a> (p /\\ x)) /\\ [a] (p \\/ x))"));
  // Psi = master-box of chi conjoined with psi: exactly one greatest fixpoint
  // wrapper around chi
  REQUIRE(d.Psi.kind() == Kind::And);
  CHECK(d.Psi.left().kind() == Kind::Nu);
  CHECK(d.Psi.right() == d.psi);

  CHECK_THROWS_AS(sum_formula(parse("p /\\ <a> x"), parse("<a> x"), "p"), Error);
}

TEST_CASE("totalize") {
  Formula t = totalize(parse("<a> x"), "x");
  CHECK(is_positive_in(t, "x"));
  CHECK(bound_vars(t).count("x") == 0);

  // least fixpoint of the result is total on every model
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    int n = 1 + static_cast<int>(rng() % 4);
    KripkeModel m = random_model(rng, n, {"a"}, {"p"});
    auto trace = approximants(m, t, "x");
    CHECK(trace.back() == m.full());
  }

  // per-model closure ordinal preserved when nonzero
  KripkeModel chain = chain_model(3, "p");
  Formula psi = parse("p \\/ <a> x");
  CHECK(closure_ordinal_on(chain, psi, "x") == 3);
  CHECK(closure_ordinal_on(chain, totalize(psi, "x"), "x") == 3);
}

TEST_CASE("lift and flatten properties") {
  std::mt19937_64 rng(43);
  FormulaGenOptions opts;
  opts.max_depth = 5;
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, opts);
    std::string xb = boxed_name(f, "x");
    // renaming the lifted copies back restores the formula
    CHECK(apply_subst(lift(f, "x", xb), Substitution::single(xb, parse("x"))) == f);
    if (is_almost_good(f, {"x"})) {
      CHECK(in_C(lift(f, "x", xb), {"x"}));
      CHECK(in_C(flatten(f, "x"), {"x"}));
    }
    CHECK(is_almost_good(boxing(f, {"x"}), {"x"}));
  }
}

TEST_CASE("flattening entails the original pointwise") {
  std::mt19937_64 rng(47);
  FormulaGenOptions opts;
  opts.max_depth = 4;
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(rng, opts);
    Formula nf = continuity_normal_form(f, "x");
    for (int k = 0; k < 5; ++k) {
      KripkeModel m = random_model(rng, 1 + static_cast<int>(rng() % 3), {"a"},
                                   {"x", "y"});
      StateSet lhs = eval(m, nf);
      CHECK((lhs & ~eval(m, f)) == 0);
    }
  }
}

TEST_CASE("ordinal normalization") {
  using O = OrdinalExpr;
  CHECK(ord_to_string(ord_normalize(O::plus(O::one(), O::omega()))) == "w");
  CHECK(ord_to_string(ord_normalize(O::plus(O::omega(), O::one()))) == "w + 1");
  CHECK(ord_to_string(ord_normalize(
            O::plus(O::plus(O::one(), O::one()), O::omega1()))) == "w1");
  CHECK(ord_to_string(ord_normalize(O::plus(O::zero(), O::one()))) == "1");
  CHECK(ord_equal(O::plus(O::one(), O::omega()), O::omega()));
  CHECK_FALSE(ord_equal(O::plus(O::omega(), O::one()), O::omega()));
}
