#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mucalc/checker.hpp"
#include "mucalc/game.hpp"
#include "mucalc/parser.hpp"
#include "mucalc/transforms.hpp"

using namespace mucalc;

namespace {

std::vector<std::string> enumeration_keys(const std::set<std::string>& actions,
                                          const std::set<std::string>& props,
                                          int max_states) {
  std::vector<std::string> keys;
  enumerate_models(actions, props, max_states, [&](const KripkeModel& m) {
    keys.push_back(print_model(m));
    return true;
  });
  return keys;
}

}  // namespace

TEST_CASE("model enumeration counts") {
  CHECK(enumeration_keys({"a"}, {"p"}, 1).size() == 4);  // 2 relations x 2 valuations
  CHECK(enumeration_keys({"a"}, {}, 1).size() == 2);
  // deterministic order
  CHECK(enumeration_keys({"a"}, {"p"}, 2) == enumeration_keys({"a"}, {"p"}, 2));
  // early stop is honoured
  int seen = 0;
  enumerate_models({"a"}, {"p"}, 2, [&](const KripkeModel&) { return ++seen < 3; });
  CHECK(seen == 3);
  CHECK(exhaustive_limit({"a"}, {"p"}, 4) == 3);
  CHECK(exhaustive_limit({"a", "b", "c"}, {"p", "q"}, 4) == 2);  // bit budget
}

TEST_CASE("distinguishing-model search") {
  SearchBudget budget;
  budget.max_states = 3;
  budget.samples = 200;
  budget.time_limit_ms = 10000;

  // syntactic equality short-circuits
  CHECK_FALSE(find_distinguishing_model(parse("<a> x"), parse("<a> x"), budget)
                  .model.has_value());

  DistinguishResult r =
      find_distinguishing_model(parse("[a] x"), parse("[a] false"), budget);
  REQUIRE(r.model.has_value());
  CHECK(r.model->num_states() <= 2);
  CHECK(eval_at(*r.model, r.state, parse("[a] x")) !=
        eval_at(*r.model, r.state, parse("[a] false")));

  Formula f = parse("mu z. x \\/ [a] z");
  DistinguishResult r2 =
      find_distinguishing_model(f, continuity_normal_form(f, "x"), budget);
  REQUIRE(r2.model.has_value());
  CHECK(r2.model->num_states() <= 2);

  SearchBudget bad;
  bad.samples = 0;
  CHECK_THROWS_AS(find_distinguishing_model(parse("x"), parse("y"), bad), Error);
}

TEST_CASE("continuity verdicts") {
  SearchBudget budget;
  budget.max_states = 3;
  budget.samples = 200;
  budget.time_limit_ms = 10000;

  CHECK(check_continuity(parse("<a> x"), "x", budget).kind == VerdictKind::InC0);
  CHECK(check_continuity(parse("nu z. x /\\ <a> z"), "x", budget).kind ==
        VerdictKind::InC1);

  Verdict box = check_continuity(parse("[a] x"), "x", budget);
  CHECK(box.kind == VerdictKind::NotContinuous);
  REQUIRE(box.witness.has_value());
  CHECK(box.witness->num_states() <= 2);
  CHECK(box.normal_form == parse("[a] false"));
  CHECK(eval_at(*box.witness, box.witness_state, parse("[a] x")) !=
        eval_at(*box.witness, box.witness_state, box.normal_form));

  Verdict mu = check_continuity(parse("mu z. x \\/ [a] z"), "x", budget);
  CHECK(mu.kind == VerdictKind::NotContinuous);
  REQUIRE(mu.witness.has_value());
  CHECK(mu.witness->num_states() <= 2);

  // a box that never matters: equivalent to its normal form on small models
  Verdict eq = check_continuity(parse("x /\\ (x \\/ [a] x)"), "x", budget);
  CHECK(eq.kind == VerdictKind::EquivalentToNormalFormUpToBound);
  CHECK(eq.bound >= 3);

  CHECK(std::string(to_string(VerdictKind::NotContinuous)) == "not-continuous");
}

TEST_CASE("verdicts are deterministic") {
  SearchBudget budget;
  budget.max_states = 3;
  budget.samples = 100;
  budget.seed = 5;
  for (auto* text : {"[a] x", "mu z. x \\/ [a] z", "<a> x"}) {
    Verdict v1 = check_continuity(parse(text), "x", budget);
    Verdict v2 = check_continuity(parse(text), "x", budget);
    CHECK(v1.kind == v2.kind);
    CHECK(v1.witness.has_value() == v2.witness.has_value());
    if (v1.witness) CHECK(print_model(*v1.witness) == print_model(*v2.witness));
  }
}

TEST_CASE("normal form entails the original on every enumerated model") {
  for (auto* text : {"[a] x", "mu z. x \\/ [a] z", "x /\\ [a] (x \\/ y)"}) {
    Formula f = parse(text);
    Formula nf = continuity_normal_form(f, "x");
    std::set<std::string> props = free_vars(f);
    for (auto& p : free_vars(nf)) props.insert(p);
    enumerate_models({"a"}, props, 3, [&](const KripkeModel& m) {
      CHECK((eval(m, nf) & ~eval(m, f)) == 0);
      return true;
    });
  }
}
