// Command-line front end: parsing/printing, occurrence classification,
// fragment membership, the rewriting pipeline, model evaluation, parity
// games, bisimulation, model generators and the continuity checker.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mucalc/checker.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/fragment.hpp"
#include "mucalc/game.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/model.hpp"
#include "mucalc/parser.hpp"
#include "mucalc/selftest.hpp"
#include "mucalc/transforms.hpp"

using nlohmann::json;
using namespace mucalc;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;
constexpr int kExitInternal = 70;

struct Globals {
  std::uint64_t seed = 1;
  int time_limit_ms = 30000;
  bool as_json = false;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Model arguments accept generator shorthands or a file path ("-" = stdin).
//   chain:N          linear a-chain, p at the end
//   ordchain:N       staircase truncation over {h, v}
//   sum:M,N          sum witness built from two chains
//   thomason:FILE    bimodal model from FILE run through the simulation
KripkeModel resolve_model(const std::string& arg) {
  auto starts = [&](const char* pre) { return arg.rfind(pre, 0) == 0; };
  if (starts("chain:")) return chain_model(std::stoi(arg.substr(6)), "p");
  if (starts("ordchain:")) return ordinal_chain_model(std::stoi(arg.substr(9)));
  if (starts("sum:")) {
    std::string rest = arg.substr(4);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw Error("sum shorthand needs sum:M,N");
    int m = std::stoi(rest.substr(0, comma));
    int n = std::stoi(rest.substr(comma + 1));
    return sum_witness_model(chain_model(m, "q"), chain_model(n, "q"), "p");
  }
  if (starts("thomason:"))
    return thomason_model(parse_model(read_file(arg.substr(9)))).model;
  return parse_model(read_file(arg));
}

std::string occ_to_string(const OccAddress& occ) {
  std::string out;
  for (int step : occ) out += step ? "r" : "l";
  return out.empty() ? "." : out;
}

std::set<std::string> split_names(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.insert(tok);
    }
  }
  return out;
}

json model_json(const KripkeModel& m) {
  json j;
  j["states"] = m.states();
  json rel = json::object();
  for (auto& a : m.actions()) {
    json edges = json::array();
    for (int i = 0; i < m.num_states(); ++i)
      for (int k = 0; k < m.num_states(); ++k)
        if (m.has_edge(a, i, k))
          edges.push_back({m.states()[static_cast<std::size_t>(i)],
                           m.states()[static_cast<std::size_t>(k)]});
    rel[a] = edges;
  }
  j["rel"] = rel;
  json val = json::object();
  for (auto& [p, s] : m.valuation()) val[p] = states_of(m, s);
  j["val"] = val;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"modal mu-calculus analysis toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed for sampling subcommands");
  app.add_option("--time-limit", g.time_limit_ms, "time limit in milliseconds");
  app.add_flag("--json", g.as_json, "structured JSON output");

  std::string formula_text, var = "x", model_arg, state, with_text, op,
              scheme_name = "submodel", prop = "p";
  std::vector<std::string> vars_opt, actions_opt;
  bool dump = false, allow_reserved = false;
  int max_states = 4, samples = 2000;

  auto* c_parse = app.add_subcommand("parse", "parse a formula and report structure");
  c_parse->add_option("formula", formula_text)->required();
  c_parse->add_flag("--reserved", allow_reserved, "accept #b marker names");

  auto* c_print = app.add_subcommand("print", "canonical re-print of a formula");
  c_print->add_option("formula", formula_text)->required();
  c_print->add_flag("--reserved", allow_reserved);

  auto* c_classify = app.add_subcommand(
      "classify", "classify every occurrence of a variable (NotBad/Boxed/VeryBad)");
  c_classify->add_option("formula", formula_text)->required();
  c_classify->add_option("--var", var);

  auto* c_fragment =
      app.add_subcommand("fragment", "membership in the continuous fragments");
  c_fragment->add_option("formula", formula_text)->required();
  c_fragment->add_option("--vars", vars_opt, "variables (repeat or comma-separate)");

  auto* c_transform = app.add_subcommand("transform", "apply a rewriting step");
  c_transform->add_option("formula", formula_text)->required();
  c_transform
      ->add_option("--op", op,
                   "lift|flatten|boxing|cnf|translate|thomason|sum|totalize|master-box")
      ->required();
  c_transform->add_option("--var", var);
  c_transform->add_option("--vars", vars_opt);
  c_transform->add_option("--with", with_text, "second formula (sum)");
  c_transform->add_option("--prop", prop, "designated proposition (sum)");
  c_transform->add_option("--scheme", scheme_name, "submodel|referee|thomason");
  c_transform->add_option("--actions", actions_opt, "actions for master-box/submodel");

  auto* c_eval = app.add_subcommand("eval", "evaluate a formula on a model");
  c_eval->add_option("formula", formula_text)->required();
  c_eval->add_option("--model", model_arg)->required();
  c_eval->add_option("--state", state, "report truth at one state");

  auto* c_approx =
      app.add_subcommand("approx", "approximant trace of a formula in a variable");
  c_approx->add_option("formula", formula_text)->required();
  c_approx->add_option("--model", model_arg)->required();
  c_approx->add_option("--var", var);

  auto* c_clord = app.add_subcommand("clord", "stabilization index of the trace");
  c_clord->add_option("formula", formula_text)->required();
  c_clord->add_option("--model", model_arg)->required();
  c_clord->add_option("--var", var);

  auto* c_game = app.add_subcommand("game", "model-checking parity game");
  c_game->add_option("formula", formula_text)->required();
  c_game->add_option("--model", model_arg)->required();
  c_game->add_flag("--dump", dump, "print the arena");
  c_game->add_option("--check", state, "winner at (state, whole formula)");

  std::string model2_arg, state2;
  auto* c_bisim = app.add_subcommand("bisim", "bisimilarity of two pointed models");
  c_bisim->add_option("--model", model_arg)->required();
  c_bisim->add_option("--model2", model2_arg)->required();
  c_bisim->add_option("--state", state)->required();
  c_bisim->add_option("--state2", state2)->required();
  c_bisim->add_option("--props", vars_opt, "propositions to respect");
  c_bisim->add_option("--actions", actions_opt, "actions to respect");

  std::string gen_spec;
  auto* c_gen = app.add_subcommand("gen-model", "emit a generated model");
  c_gen->add_option("spec", gen_spec, "chain:N | ordchain:N | sum:M,N | thomason:FILE")
      ->required();

  auto* c_check = app.add_subcommand("check-continuity",
                                     "decide/refute continuity in a variable");
  c_check->add_option("formula", formula_text)->required();
  c_check->add_option("--var", var);
  c_check->add_option("--max-states", max_states);
  c_check->add_option("--samples", samples);

  auto* c_selftest = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto parse_input = [&](const std::string& text) {
    return parse_formula(text, ParseOptions{allow_reserved});
  };

  if (c_parse->parsed() || c_print->parsed()) {
    ParseResult r = parse_input(formula_text);
    if (c_print->parsed()) {
      std::cout << print(r.formula) << "\n";
      return 0;
    }
    if (g.as_json) {
      json j;
      j["formula"] = print(r.formula);
      j["size"] = r.formula.size();
      j["free"] = free_vars(r.formula);
      j["bound"] = bound_vars(r.formula);
      j["well_named"] = is_well_named(r.formula);
      j["expanded_negation"] = r.expanded_negation;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "formula: " << print(r.formula) << "\n";
      std::cout << "size: " << r.formula.size() << "\n";
      std::cout << "free:";
      for (auto& v : free_vars(r.formula)) std::cout << " " << v;
      std::cout << "\nwell-named: " << (is_well_named(r.formula) ? "yes" : "no")
                << "\n";
      if (r.expanded_negation)
        std::cout << "note: general negation expanded to negation normal form\n";
    }
    return 0;
  }

  if (c_classify->parsed()) {
    Formula f = parse(formula_text);
    FormulaGraph graph = build_graph(f);
    json arr = json::array();
    for (auto& occ : occurrences_of(f, var, /*free_only=*/false)) {
      const char* cls = to_string(classify_occurrence(graph, occ, var));
      if (g.as_json)
        arr.push_back({{"address", occ_to_string(occ)}, {"class", cls}});
      else
        std::cout << occ_to_string(occ) << ": " << cls << "\n";
    }
    if (g.as_json) std::cout << arr.dump(2) << "\n";
    return 0;
  }

  if (c_fragment->parsed()) {
    Formula f = parse(formula_text);
    std::set<std::string> X = split_names(vars_opt);
    if (X.empty()) X.insert(var);
    bool c = in_C(f, X), c0 = in_C0(f, X);
    std::string names;
    for (auto& x : X) names += (names.empty() ? "" : ",") + x;
    if (g.as_json) {
      json j{{"vars", X}, {"in_C", c}, {"in_C0", c0},
             {"almost_good", is_almost_good(f, X)}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "C(" << names << "): " << (c ? "yes" : "no") << ", C0("
                << names << "): " << (c0 ? "yes" : "no") << "\n";
    }
    return 0;
  }

  if (c_transform->parsed()) {
    Formula f = parse_formula(formula_text, ParseOptions{true}).formula;
    std::set<std::string> X = split_names(vars_opt);
    if (X.empty()) X.insert(var);
    auto emit = [&](const Formula& out) {
      if (g.as_json)
        std::cout << json{{"result", print(out)}}.dump(2) << "\n";
      else
        std::cout << print(out) << "\n";
    };
    if (op == "lift") {
      emit(lift(f, var));
    } else if (op == "flatten") {
      emit(flatten(f, var));
    } else if (op == "boxing") {
      emit(boxing(f, X));
    } else if (op == "cnf") {
      emit(continuity_normal_form(f, var));
    } else if (op == "translate" || op == "thomason") {
      if (op == "thomason") {
        emit(thomason_translate(f));
      } else {
        TranslationScheme scheme;
        if (scheme_name == "submodel") {
          std::set<std::string> acts = split_names(actions_opt);
          if (acts.empty())
            throw Error("translate with the submodel scheme needs --actions");
          scheme = submodel_scheme(acts);
        } else if (scheme_name == "referee") {
          scheme = referee_scheme();
        } else if (scheme_name == "thomason") {
          scheme = thomason_scheme();
        } else {
          throw Error("unknown scheme: " + scheme_name);
        }
        emit(translate(f, scheme));
      }
    } else if (op == "sum") {
      if (with_text.empty()) throw Error("sum needs --with SECOND_FORMULA");
      Formula f1 = parse(with_text);
      SumFormulas s = sum_formula(f, f1, prop, var);
      if (g.as_json) {
        json j{{"chi", print(s.chi)}, {"psi", print(s.psi)}, {"Psi", print(s.Psi)}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "chi: " << print(s.chi) << "\n";
        std::cout << "psi: " << print(s.psi) << "\n";
        std::cout << "Psi: " << print(s.Psi) << "\n";
      }
    } else if (op == "totalize") {
      emit(totalize(f, var));
    } else if (op == "master-box") {
      std::set<std::string> acts = split_names(actions_opt);
      if (acts.empty()) acts.insert("a");
      emit(master_box(f, acts));
    } else {
      throw CLI::ValidationError("--op", "unknown transform: " + op);
    }
    return 0;
  }

  if (c_eval->parsed()) {
    Formula f = parse(formula_text);
    KripkeModel m = resolve_model(model_arg);
    if (!state.empty()) {
      bool holds = eval_at(m, state, f);
      if (g.as_json)
        std::cout << json{{"state", state}, {"holds", holds}}.dump(2) << "\n";
      else
        std::cout << (holds ? "yes" : "no") << "\n";
      return 0;
    }
    auto sat = states_of(m, eval(m, f));
    if (g.as_json) {
      std::cout << json{{"states", sat}}.dump(2) << "\n";
    } else {
      for (auto& s : sat) std::cout << s << "\n";
    }
    return 0;
  }

  if (c_approx->parsed() || c_clord->parsed()) {
    Formula f = parse(formula_text);
    KripkeModel m = resolve_model(model_arg);
    auto trace = approximants(m, f, var);
    int cl = static_cast<int>(trace.size()) - 2;
    if (c_clord->parsed()) {
      if (g.as_json)
        std::cout << json{{"closure_ordinal", cl}}.dump(2) << "\n";
      else
        std::cout << cl << "\n";
      return 0;
    }
    json arr = json::array();
    for (std::size_t k = 0; k < trace.size(); ++k) {
      auto names = states_of(m, trace[k]);
      if (g.as_json) {
        arr.push_back(names);
      } else {
        std::cout << "S" << k << ":";
        for (auto& s : names) std::cout << " " << s;
        std::cout << "\n";
      }
    }
    if (g.as_json)
      std::cout << json{{"trace", arr}, {"closure_ordinal", cl}}.dump(2) << "\n";
    else
      std::cout << "stabilizes at: " << cl << "\n";
    return 0;
  }

  if (c_game->parsed()) {
    Formula f = make_well_named(parse(formula_text));
    KripkeModel m = resolve_model(model_arg);
    ParityGame game = build_game(m, f);
    if (dump) {
      std::cout << dump_game(game);
      if (state.empty()) return 0;
    }
    if (state.empty()) throw Error("game needs --dump and/or --check STATE");
    GameSolution sol = solve(game);
    int pos = game.position(m.state_index(state), 0);
    bool eva = sol.winner[static_cast<std::size_t>(pos)] == Player::Eva;
    if (g.as_json)
      std::cout << json{{"state", state}, {"winner", eva ? "Eva" : "Adam"}}.dump(2)
                << "\n";
    else
      std::cout << (eva ? "Eva" : "Adam") << "\n";
    return 0;
  }

  if (c_bisim->parsed()) {
    KripkeModel m1 = resolve_model(model_arg);
    KripkeModel m2 = resolve_model(model2_arg);
    std::set<std::string> props = split_names(vars_opt);
    if (props.empty()) {
      for (auto& [p, s] : m1.valuation()) props.insert(p);
      for (auto& [p, s] : m2.valuation()) props.insert(p);
    }
    std::set<std::string> acts = split_names(actions_opt);
    if (acts.empty()) {
      acts = m1.action_set();
      for (auto& a : m2.action_set()) acts.insert(a);
    }
    bool b = bisimilar(m1, state, m2, state2, props, acts);
    if (g.as_json)
      std::cout << json{{"bisimilar", b}}.dump(2) << "\n";
    else
      std::cout << (b ? "yes" : "no") << "\n";
    return b ? 0 : 1;
  }

  if (c_gen->parsed()) {
    if (gen_spec.rfind("thomason:", 0) == 0) {
      ThomasonModel tm = thomason_model(parse_model(read_file(gen_spec.substr(9))));
      if (g.as_json) {
        json j = model_json(tm.model);
        j["embedding"] = tm.embedding;
        std::cout << j.dump(2) << "\n";
      } else {
        for (auto& [from, to] : tm.embedding)
          std::cout << "# embed " << from << " -> " << to << "\n";
        std::cout << print_model(tm.model);
      }
      return 0;
    }
    KripkeModel m = resolve_model(gen_spec);
    if (g.as_json)
      std::cout << model_json(m).dump(2) << "\n";
    else
      std::cout << print_model(m);
    return 0;
  }

  if (c_check->parsed()) {
    Formula f = parse(formula_text);
    SearchBudget budget;
    budget.max_states = max_states;
    budget.samples = samples;
    budget.seed = g.seed;
    budget.time_limit_ms = g.time_limit_ms;
    Verdict v = check_continuity(f, var, budget);
    bool has_nf = v.kind != VerdictKind::InC0 && v.kind != VerdictKind::InC1;
    if (g.as_json) {
      json j{{"verdict", to_string(v.kind)}, {"bound", v.bound}};
      if (has_nf) j["normal_form"] = print(v.normal_form);
      if (v.witness) {
        j["witness"] = model_json(*v.witness);
        j["witness_state"] = v.witness_state;
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "verdict: " << to_string(v.kind) << "\n";
      if (has_nf) std::cout << "normal form: " << print(v.normal_form) << "\n";
      if (v.kind == VerdictKind::EquivalentToNormalFormUpToBound)
        std::cout << "exhaustively checked up to " << v.bound << " states\n";
      if (v.witness) {
        std::cout << "witness state: " << v.witness_state << "\n"
                  << print_model(*v.witness);
      }
    }
    switch (v.kind) {
      case VerdictKind::InC0:
      case VerdictKind::InC1:
      case VerdictKind::EquivalentToNormalFormUpToBound:
        return 0;
      case VerdictKind::NotContinuous:
        return 1;
      case VerdictKind::Exhausted:
        return 2;
    }
    return kExitInternal;
  }

  if (c_selftest->parsed()) {
    return acceptance::run_all(std::cout, g.seed) ? 0 : 1;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
