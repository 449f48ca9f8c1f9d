#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "wadge/acceptance.hpp"
#include "wadge/analysis.hpp"
#include "wadge/canonical.hpp"
#include "wadge/cutting_games.hpp"
#include "wadge/diagnostics.hpp"

using namespace wadge;
using nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Either --pos/--neg files or a --corpus entry name.
struct PairArgs {
  std::string pos, neg, corpus;

  void add(CLI::App* app) {
    app->add_option("--pos", pos, "automaton for the language");
    app->add_option("--neg", neg, "automaton for its complement");
    app->add_option("--corpus", corpus, "use a corpus entry instead of files");
  }

  AutomatonPair load() const {
    if (!corpus.empty()) return corpus_pair(corpus_entry(corpus));
    if (pos.empty() || neg.empty()) throw std::invalid_argument("give --pos and --neg, or --corpus");
    return AutomatonPair(parse_automaton(slurp(pos)), parse_automaton(slurp(neg)));
  }
};

int exit_code(Delta02Verdict v) {
  switch (v) {
    case Delta02Verdict::InDelta02: return 0;
    case Delta02Verdict::NotInDelta02: return 1;
    case Delta02Verdict::Unknown: break;
  }
  return 2;
}

void print_summary(const AnalysisReport& r) {
  std::cout << "verdict: " << to_string(r.verdict) << "\n";
  if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  std::cout << "pair: " << (r.validation.disjoint ? "disjoint" : "overlapping") << ", "
            << to_string(r.validation.soundness) << "\n";
  std::cout << "algebra: " << r.raw_types << " types, " << r.raw_behaviors << " behaviors"
            << (r.algebra_complete ? "" : " (incomplete)") << "; quotient " << r.quotient_types << " types, "
            << r.quotient_behaviors << " behaviors\n";
  if (r.graph_built)
    std::cout << "graph: " << r.graph.nodes << " nodes, " << r.graph.edges << " edges, " << r.graph.sccs
              << " sccs, " << r.cyclic_components << " cyclic, recursive " << (r.witness ? "yes" : "no") << "\n";
  if (r.alternation) {
    std::cout << "alternation index (cap " << r.alternation->cap << "): ";
    if (r.alternation->fails_at)
      std::cout << "FailsAt " << *r.alternation->fails_at << "\n";
    else
      std::cout << "SurvivesCap\n";
  }
  if (r.delayed) {
    std::cout << "delayed game probe (cap " << r.delayed->cap << "): ";
    if (r.delayed->constrainer_wins_at)
      std::cout << "ConstrainerWins " << *r.delayed->constrainer_wins_at << "\n";
    else
      std::cout << "AlternatorWinsUpToCap\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta^0_2 membership for regular tree languages"};
  app.require_subcommand(1);
  int code = 0;

  // analyze
  auto* an = app.add_subcommand("analyze", "run the full pipeline on a pair");
  PairArgs an_pair;
  an_pair.add(an);
  AnalysisOptions an_opts;
  bool an_json = false, an_timings = false;
  std::string an_dot, an_alg_out, an_alg_in;
  an->add_flag("--json", an_json, "print the report as JSON");
  an->add_flag("--timings", an_timings, "include timings in the JSON report");
  an->add_option("--dot", an_dot, "write the strategy graph to this file");
  an->add_option("--algebra-out", an_alg_out, "write the algebra tables");
  an->add_option("--algebra-in", an_alg_in, "read the algebra tables instead of saturating");
  an->add_option("--game-cap", an_opts.game_cap, "largest cutting game tried")->capture_default_str();
  an->add_option("--seed", an_opts.seed, "sampling seed")->capture_default_str();
  an->add_option("--saturation-budget", an_opts.saturation_budget, "algebra saturation budget")
      ->capture_default_str();
  an->add_option("--samples", an_opts.validation_samples, "pair validation samples")->capture_default_str();
  an->callback([&] {
    auto pair = an_pair.load();
    std::optional<AlgebraTables> preloaded;
    if (!an_alg_in.empty()) preloaded = AlgebraTables::from_json(slurp(an_alg_in), pair);
    const auto a = analyze(std::move(pair), an_opts, std::move(preloaded));
    if (!an_alg_out.empty() && a.algebra) spill(an_alg_out, a.algebra->to_json());
    if (!an_dot.empty() && a.graph) spill(an_dot, a.graph->to_dot());
    if (an_json)
      std::cout << report_to_json(a.report, an_timings);
    else
      print_summary(a.report);
    code = exit_code(a.report.verdict);
  });

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "canonical languages");
  corpus_cmd->require_subcommand(1);
  auto* emit = corpus_cmd->add_subcommand("emit", "write a corpus entry as automaton files");
  std::string emit_name, emit_out = ".";
  bool emit_all = false;
  std::uint64_t emit_seed = 0;
  emit->add_option("--name", emit_name, "entry name");
  emit->add_flag("--all", emit_all, "every entry");
  emit->add_option("--out", emit_out, "output directory")->capture_default_str();
  emit->add_option("--seed", emit_seed, "validation seed")->capture_default_str();
  emit->callback([&] {
    if (emit_all) {
      for (const auto& e : corpus()) emit_corpus_entry(e, emit_out, emit_seed);
    } else {
      if (emit_name.empty()) throw std::invalid_argument("give --name or --all");
      emit_corpus_entry(corpus_entry(emit_name), emit_out, emit_seed);
    }
  });
  auto* list = corpus_cmd->add_subcommand("list", "list corpus entries");
  list->callback([&] {
    for (const auto& e : corpus()) {
      std::cout << e.name << "\t";
      std::cout << (e.in_delta02 ? (*e.in_delta02 ? "InDelta02" : "NotInDelta02") : "-");
      std::cout << "\t" << e.description << "\n";
    }
  });

  // game solve
  auto* game = app.add_subcommand("game", "finite cutting games");
  game->require_subcommand(1);
  auto* solve = game->add_subcommand("solve", "solve one finite cutting game");
  PairArgs game_pair;
  game_pair.add(solve);
  std::string spec_file;
  solve->add_option("--spec", spec_file, "game spec JSON")->required();
  solve->callback([&] {
    const auto pair = game_pair.load();
    const auto spec = parse_game_spec(slurp(spec_file), pair.alphabet());
    std::optional<AlgebraTables> alg;
    for (const auto& c : spec.sequence)
      if (c.kind == RoundConstraint::Kind::Type && !alg) alg = AlgebraTables::compute(pair, 60000);
    const auto v = solve_finite_game(spec, pair, alg ? &*alg : nullptr);
    std::cout << verdict_to_json(v) << "\n";
  });

  // graph dot
  auto* graph_cmd = app.add_subcommand("graph", "strategy graph");
  graph_cmd->require_subcommand(1);
  auto* dot = graph_cmd->add_subcommand("dot", "render the strategy graph as DOT");
  PairArgs dot_pair;
  dot_pair.add(dot);
  std::string dot_out, dot_alg_in;
  std::size_t dot_max = 400, dot_budget = 60000;
  dot->add_option("--out", dot_out, "output file, default stdout");
  dot->add_option("--max-nodes", dot_max, "node limit before only cyclic nodes are drawn")->capture_default_str();
  dot->add_option("--algebra-in", dot_alg_in, "read the algebra tables instead of saturating");
  dot->add_option("--saturation-budget", dot_budget, "algebra saturation budget")->capture_default_str();
  dot->callback([&] {
    const auto pair = dot_pair.load();
    const auto alg = dot_alg_in.empty() ? AlgebraTables::compute(pair, dot_budget)
                                        : AlgebraTables::from_json(slurp(dot_alg_in), pair);
    if (!alg.complete()) throw std::runtime_error("saturation budget exhausted");
    const SyntacticAlgebra syn(alg);
    const auto g = StrategyGraph::build(syn);
    const auto text = g.to_dot(dot_max);
    if (dot_out.empty())
      std::cout << text;
    else
      spill(dot_out, text);
  });

  // member
  auto* member = app.add_subcommand("member", "tree membership");
  std::string tree_file, aut_file;
  member->add_option("--tree", tree_file, "tree file")->required();
  member->add_option("--aut", aut_file, "automaton file")->required();
  member->callback([&] {
    const auto a = parse_automaton(slurp(aut_file));
    const auto t = parse_tree(slurp(tree_file), a.alphabet());
    std::cout << (accepts(a, t) ? "true" : "false") << "\n";
  });

  // validate-pair
  auto* vp = app.add_subcommand("validate-pair", "disjointness and coverage of a pair");
  PairArgs vp_pair;
  vp_pair.add(vp);
  std::uint64_t vp_seed = 0;
  std::size_t vp_samples = 200;
  vp->add_option("--seed", vp_seed, "sampling seed")->capture_default_str();
  vp->add_option("--samples", vp_samples, "sampled trees")->capture_default_str();
  vp->callback([&] {
    const auto v = validate_pair(vp_pair.load(), vp_seed, vp_samples);
    ordered_json j{{"disjoint", v.disjoint},
                   {"soundness", to_string(v.soundness)},
                   {"samples", v.samples},
                   {"uncovered", v.uncovered}};
    if (v.overlap) j["overlapWitness"] = to_text(*v.overlap);
    if (v.uncovered_example) j["uncoveredExample"] = to_text(*v.uncovered_example);
    std::cout << j.dump(2) << "\n";
    code = v.disjoint ? 0 : 1;
  });

  // diag check-strategy
  auto* diag = app.add_subcommand("diag", "strategy tree diagnostics");
  diag->require_subcommand(1);
  auto* cs = diag->add_subcommand("check-strategy", "validate a strategy tree");
  PairArgs cs_pair;
  cs_pair.add(cs);
  std::string cs_file, cs_alg_in;
  cs->add_option("--file", cs_file, "strategy tree JSON")->required();
  cs->add_option("--algebra-in", cs_alg_in, "algebra tables the type ids refer to");
  cs->callback([&] {
    const auto pair = cs_pair.load();
    const auto alg = cs_alg_in.empty() ? AlgebraTables::compute(pair, 60000)
                                       : AlgebraTables::from_json(slurp(cs_alg_in), pair);
    const auto s = parse_strategy_tree(slurp(cs_file), pair.alphabet());
    const auto c = check_strategy_tree(s, alg);
    ordered_json j{{"valid", c.valid}};
    if (!c.valid) {
      j["reason"] = c.reason;
      j["node"] = c.node ? ordered_json(*c.node) : ordered_json();
    } else {
      j["games"] = c.games;
    }
    j["layers"] = s.layers.size();
    j["rootAlternation"] = root_alternation(s);
    j["limitAlternation"] = limit_alternation(s);
    std::cout << j.dump(2) << "\n";
    code = c.valid ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
