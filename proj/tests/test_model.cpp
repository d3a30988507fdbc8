#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mucalc/gen.hpp"
#include "mucalc/model.hpp"
#include "mucalc/parser.hpp"
#include "mucalc/transforms.hpp"

using namespace mucalc;

namespace {

StateSet mask(const KripkeModel& m, std::initializer_list<const char*> ids) {
  StateSet s = 0;
  for (auto* id : ids) s |= StateSet{1} << m.state_index(id);
  return s;
}

}  // namespace

TEST_CASE("model text format round trip") {
  std::string text =
      "# three-state chain\n"
      "states: s0 s1 s2\n"
      "rel a: s0->s1, s1->s2\n"
      "val p: s2\n";
  KripkeModel m = parse_model(text);
  CHECK(m.num_states() == 3);
  CHECK(m.has_edge("a", 0, 1));
  CHECK_FALSE(m.has_edge("a", 1, 0));
  CHECK(m.prop("p") == mask(m, {"s2"}));
  KripkeModel again = parse_model(print_model(m));
  CHECK(again.states() == m.states());
  CHECK(again.valuation() == m.valuation());
  CHECK(print_model(again) == print_model(m));

  CHECK_THROWS_AS(parse_model("rel a: s0->s1\n"), Error);  // no states header
  CHECK_THROWS_AS(parse_model("states: s0\nval p: s7\n"), Error);
}

TEST_CASE("eval basics") {
  KripkeModel one({"s"}, {"a"});
  CHECK(eval(one, parse("[a] false")) == one.full());
  CHECK(eval(one, parse("<a> true")) == 0);
  CHECK_THROWS_AS(eval(one, parse("q")), Error);
  CHECK_THROWS_AS(eval(one, parse("<b> true")), Error);

  KripkeModel chain = chain_model(3, "x");
  CHECK(eval(chain, parse("mu z. x \\/ <a> z")) == chain.full());

  KripkeModel loop({"s"}, {"a"});
  loop.add_edge("a", 0, 0);
  CHECK(eval(loop, parse("nu z. <a> z")) == loop.full());
  CHECK(eval(loop, parse("mu z. <a> z")) == 0);
}

TEST_CASE("approximants") {
  KripkeModel chain = chain_model(3, "p");
  auto trace = approximants(chain, parse("p \\/ <a> x"), "x");
  REQUIRE(trace.size() == 5);
  CHECK(trace[0] == 0);
  CHECK(trace[1] == mask(chain, {"s2"}));
  CHECK(trace[2] == mask(chain, {"s1", "s2"}));
  CHECK(trace[3] == chain.full());
  CHECK(trace[4] == chain.full());
  CHECK(closure_ordinal_on(chain, parse("p \\/ <a> x"), "x") == 3);

  auto empty = approximants(chain, parse("<a> x"), "x");
  CHECK(empty == std::vector<StateSet>{0, 0});
  CHECK(closure_ordinal_on(chain, parse("<a> x"), "x") == 0);

  auto top = approximants(chain, parse("true"), "x");
  CHECK(top == std::vector<StateSet>{0, chain.full(), chain.full()});

  CHECK_THROWS_AS(approximants(chain, parse("~x"), "x"), Error);

  // traces are weakly increasing and stabilize within |states| steps
  std::mt19937_64 rng(53);
  FormulaGenOptions opts;
  opts.max_depth = 4;
  opts.vars = {"x", "y"};
  opts.positive_only = {"x"};
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(rng, opts);
    KripkeModel m = random_model(rng, 1 + static_cast<int>(rng() % 5), {"a"},
                                 {"x", "y"});
    auto t = approximants(m, f, "x");
    CHECK(t.size() <= static_cast<std::size_t>(m.num_states()) + 2);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) CHECK((t[k] & ~t[k + 1]) == 0);
  }
}

TEST_CASE("bisimulation") {
  KripkeModel one({"s"}, {"a"});
  one.set_valuation("p", 1);
  CHECK(bisimilar(one, "s", one, "s", {"p"}, {"a"}));

  KripkeModel self({"s"}, {"a"});
  self.add_edge("a", 0, 0);
  KripkeModel cycle({"t0", "t1"}, {"a"});
  cycle.add_edge("a", 0, 1);
  cycle.add_edge("a", 1, 0);
  CHECK(bisimilar(self, "s", cycle, "t0", {}, {"a"}));

  KripkeModel lit({"s"}, {"a"});
  lit.set_valuation("p", 1);
  KripkeModel nolit({"t"}, {"a"});
  nolit.set_valuation("p", 0);
  CHECK_FALSE(bisimilar(lit, "s", nolit, "t", {"p"}, {"a"}));
  CHECK(bisimilar(lit, "s", nolit, "t", {}, {"a"}));  // p not respected
}

TEST_CASE("submodel, union, variant") {
  KripkeModel chain = chain_model(3, "p");
  KripkeModel sub = induced_submodel(chain, mask(chain, {"s0", "s2"}));
  CHECK(sub.num_states() == 2);
  CHECK_FALSE(sub.has_edge("a", 0, 1));
  CHECK(sub.prop("p") == StateSet{1} << sub.state_index("s2"));
  CHECK(induced_submodel(chain, chain.full()).num_states() == 3);
  CHECK(induced_submodel(chain, 0).num_states() == 0);

  KripkeModel u = disjoint_union(chain, chain);
  CHECK(u.num_states() == 6);
  CHECK(u.has_edge("a", u.state_index("l:s0"), u.state_index("l:s1")));
  CHECK_FALSE(u.has_edge("a", u.state_index("l:s2"), u.state_index("r:s0")));

  KripkeModel v = variant(chain, "x", mask(chain, {"s1"}));
  CHECK(eval(v, parse("x")) == mask(chain, {"s1"}));
  CHECK(v.prop("p") == chain.prop("p"));

  CHECK(is_closed(chain, chain.full()));
  CHECK_FALSE(is_closed(chain, mask(chain, {"s0"})));
  CHECK(is_closed(chain, mask(chain, {"s2"})));
}

TEST_CASE("simulation of a bimodal model") {
  KripkeModel m({"u", "w"}, {"h", "v"});
  m.add_edge("h", 0, 1);
  m.add_edge("v", 1, 0);
  m.set_valuation("x", 1);  // x at u
  ThomasonModel tm = thomason_model(m);
  CHECK(tm.model.num_states() == 2 * m.num_states() + 1);
  CHECK(tm.embedding.at("u") == "u.h");

  auto idx = [&](const std::string& s) { return tm.model.state_index(s); };
  // same-state switches in both directions
  CHECK(tm.model.has_edge("a", idx("u.h"), idx("u.v")));
  CHECK(tm.model.has_edge("a", idx("u.v"), idx("u.h")));
  // original h edges on the h layer, v edges on the v layer
  CHECK(tm.model.has_edge("a", idx("u.h"), idx("w.h")));
  CHECK(tm.model.has_edge("a", idx("w.v"), idx("u.v")));
  // valuation copied to both layers
  CHECK(eval_at(tm.model, "u.h", parse("x")));
  CHECK(eval_at(tm.model, "u.v", parse("x")));

  // image states are exactly those satisfying dia-box-false (via the pit)
  StateSet image = 0;
  for (auto& [from, to] : tm.embedding)
    image |= StateSet{1} << tm.model.state_index(to);
  CHECK(eval(tm.model, parse("<a> [a] false")) == image);
}

TEST_CASE("sum witness model") {
  KripkeModel a = chain_model(2, "q");
  KripkeModel b = chain_model(3, "q");
  KripkeModel w = sum_witness_model(a, b, "p");
  CHECK(w.num_states() == 5);
  // every second-block state reaches every first-block state
  for (auto& sb : b.states())
    for (auto& sa : a.states())
      CHECK(w.has_edge("a", w.state_index("b:" + sb), w.state_index("a:" + sa)));
  // p marks exactly the second block
  StateSet beta = 0;
  for (auto& sb : b.states()) beta |= StateSet{1} << w.state_index("b:" + sb);
  CHECK(w.prop("p") == beta);
  CHECK_THROWS_AS(sum_witness_model(a, b, "q"), Error);  // p already valued
}

TEST_CASE("staircase truncation") {
  KripkeModel m = ordinal_chain_model(4);
  CHECK(m.num_states() == 4);
  for (int i = 0; i < 4; ++i) CHECK(m.has_edge("h", i, i));
  for (int i = 1; i < 4; ++i) CHECK(m.has_edge("v", i, i - 1));
  CHECK(m.succ("v", 0) == 0);

  Formula Phi = parse("(nu z. <v> x /\\ <h> z) \\/ [v] false");
  auto trace = approximants(m, Phi, "x");
  REQUIRE(trace.size() == 6);
  for (int k = 0; k <= 4; ++k) CHECK(trace[static_cast<std::size_t>(k)] ==
                                     ((StateSet{1} << k) - 1));
  CHECK(closure_ordinal_on(m, Phi, "x") == 4);
}

TEST_CASE("chain model") {
  KripkeModel m = chain_model(3, "p");
  CHECK(closure_ordinal_on(m, parse("p \\/ <a> x"), "x") == 3);
  CHECK(eval(m, parse("<a> p")) == mask(m, {"s1"}));
  // bisimulation-minimal: distinct states are non-bisimilar
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK_FALSE(bisimilar(m, m.states()[static_cast<std::size_t>(i)], m,
                            m.states()[static_cast<std::size_t>(j)], {"p"}, {"a"}));
}

TEST_CASE("acceptability") {
  KripkeModel m = chain_model(2, "p");
  CHECK(is_acceptable(m, parse("true")));
  CHECK_FALSE(is_acceptable(m, parse("p")));  // p fails at s0
  KripkeModel all = variant(m, "p", m.full());
  CHECK(is_acceptable(all, parse("p")));
}
