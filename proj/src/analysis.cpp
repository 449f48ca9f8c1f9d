#include "wadge/analysis.hpp"

#include <json.hpp>

#include <chrono>
#include <stdexcept>

#include "wadge/digest.hpp"

namespace wadge {

using nlohmann::ordered_json;

namespace {

class Stopwatch {
public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

ordered_json node_json(const StrategyNode& n) { return {{"behavior", n.behavior}, {"type", n.type}}; }

}  // namespace

std::string to_string(Delta02Verdict v) {
  switch (v) {
    case Delta02Verdict::InDelta02: return "InDelta02";
    case Delta02Verdict::NotInDelta02: return "NotInDelta02";
    case Delta02Verdict::Unknown: break;
  }
  return "Unknown";
}

bool AnalysisReport::coherent() const {
  if (verdict == Delta02Verdict::Unknown || !alternation) return true;
  // Both directions of the cross-check reduce to: a recursive graph never
  // meets a failing finite game.
  return !(verdict == Delta02Verdict::NotInDelta02 && alternation->fails_at);
}

Analysis analyze(AutomatonPair pair, const AnalysisOptions& options, std::optional<AlgebraTables> algebra) {
  Analysis a;
  a.pair = std::make_unique<AutomatonPair>(std::move(pair));
  auto& r = a.report;
  r.seed = options.seed;
  r.positive_digest = digest_hex(to_text(a.pair->positive));
  r.negative_digest = digest_hex(to_text(a.pair->negative));
  Stopwatch clock;

  r.validation = validate_pair(*a.pair, options.seed, options.validation_samples);
  a.pair->soundness = r.validation.soundness;
  r.timings.validation = clock.lap();
  if (!r.validation.disjoint) {
    r.note = "the automata overlap";
    return a;
  }

  a.algebra = std::make_unique<AlgebraTables>(algebra ? std::move(*algebra)
                                                      : AlgebraTables::compute(*a.pair, options.saturation_budget));
  r.raw_types = a.algebra->type_count();
  r.raw_behaviors = a.algebra->behavior_count();
  r.saturation_steps = a.algebra->steps();
  r.algebra_complete = a.algebra->complete();
  r.timings.algebra = clock.lap();

  if (options.evidence) {
    AlternatingChains chains(*a.pair);
    r.alternation = alternation_index(chains, options.game_cap);
    r.delayed = delayed_game_probe(chains, options.game_cap);
    r.timings.games = clock.lap();
  }

  if (!r.algebra_complete) {
    r.note = "saturation budget exhausted";
    return a;
  }
  try {
    a.quotient = std::make_unique<SyntacticAlgebra>(*a.algebra);
  } catch (const std::length_error& e) {
    r.note = e.what();
    return a;
  }
  r.quotient_types = a.quotient->type_count();
  r.quotient_behaviors = a.quotient->behavior_count();
  r.timings.quotient = clock.lap();

  a.graph = std::make_unique<StrategyGraph>(StrategyGraph::build(*a.quotient));
  r.graph_built = true;
  r.graph = a.graph->stats();
  r.cyclic_components = a.graph->cyclic_components().size();
  r.path_edge_violations = a.graph->path_edge_violations();
  r.witness = a.graph->witness();
  r.verdict = a.graph->recursive() ? Delta02Verdict::NotInDelta02 : Delta02Verdict::InDelta02;
  r.timings.graph = clock.lap();
  return a;
}

Delta02Verdict decide_delta02(const AutomatonPair& pair, std::size_t saturation_budget) {
  AnalysisOptions o;
  o.saturation_budget = saturation_budget;
  o.evidence = false;
  return analyze(pair, o).report.verdict;
}

std::string report_to_json(const AnalysisReport& r, bool with_timings) {
  ordered_json j;
  j["verdict"] = to_string(r.verdict);
  if (!r.note.empty()) j["note"] = r.note;
  j["seed"] = r.seed;
  j["inputs"] = {{"positiveDigest", r.positive_digest}, {"negativeDigest", r.negative_digest}};
  ordered_json v{{"disjoint", r.validation.disjoint},
                 {"soundness", to_string(r.validation.soundness)},
                 {"samples", r.validation.samples},
                 {"uncovered", r.validation.uncovered}};
  if (r.validation.overlap) v["overlapWitness"] = to_text(*r.validation.overlap);
  if (r.validation.uncovered_example) v["uncoveredExample"] = to_text(*r.validation.uncovered_example);
  j["pair"] = v;
  j["algebra"] = {{"complete", r.algebra_complete},
                  {"steps", r.saturation_steps},
                  {"types", r.raw_types},
                  {"behaviors", r.raw_behaviors},
                  {"quotientTypes", r.quotient_types},
                  {"quotientBehaviors", r.quotient_behaviors}};
  if (r.graph_built) {
    ordered_json g{{"nodes", r.graph.nodes},
                   {"edges", r.graph.edges},
                   {"sccs", r.graph.sccs},
                   {"cyclicNodes", r.graph.cyclic_nodes},
                   {"cyclicComponents", r.cyclic_components},
                   {"closurePairs", r.graph.closure_pairs},
                   {"pathPairs", r.graph.path_pairs},
                   {"limitPairs", r.graph.limit_pairs},
                   {"pathEdgeViolations", r.path_edge_violations},
                   {"recursive", r.witness.has_value()}};
    if (r.witness) {
      g["witnessSCC"] = {node_json(r.witness->first), node_json(r.witness->second)};
    } else {
      g["witnessSCC"] = nullptr;
    }
    j["graph"] = g;
  } else {
    j["graph"] = nullptr;
  }
  ordered_json ev = ordered_json::object();
  if (r.alternation)
    ev["alternationIndex"] = {{"cap", r.alternation->cap},
                              {"result", r.alternation->survives() ? "SurvivesCap" : "FailsAt"},
                              {"k", r.alternation->fails_at ? ordered_json(*r.alternation->fails_at) : ordered_json()}};
  if (r.delayed)
    ev["delayedGameProbe"] = {
        {"cap", r.delayed->cap},
        {"result", r.delayed->survives() ? "AlternatorWinsUpToCap" : "ConstrainerWins"},
        {"k", r.delayed->constrainer_wins_at ? ordered_json(*r.delayed->constrainer_wins_at) : ordered_json()}};
  ev["coherent"] = r.coherent();
  j["evidence"] = ev;
  if (with_timings)
    j["timings"] = {{"validation", r.timings.validation}, {"algebra", r.timings.algebra},
                    {"quotient", r.timings.quotient},     {"graph", r.timings.graph},
                    {"games", r.timings.games}};
  return j.dump(2) + "\n";
}

}  // namespace wadge
