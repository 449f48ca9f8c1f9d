#pragma once

// The whole pipeline on one automaton pair: validation, algebra, quotient,
// strategy graph, the Delta^0_2 verdict and bounded cutting-game evidence.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "wadge/algebra.hpp"
#include "wadge/cutting_games.hpp"
#include "wadge/pair.hpp"
#include "wadge/strategy_graph.hpp"
#include "wadge/syntactic.hpp"

namespace wadge {

enum class Delta02Verdict { InDelta02, NotInDelta02, Unknown };
std::string to_string(Delta02Verdict v);

struct AnalysisOptions {
  std::size_t saturation_budget = 60000;
  unsigned game_cap = 6;
  std::uint64_t seed = 0;
  std::size_t validation_samples = 200;
  bool evidence = true;  // run the cutting-game probes
};

struct Timings {
  double validation = 0, algebra = 0, quotient = 0, graph = 0, games = 0;
};

struct AnalysisReport {
  std::string positive_digest, negative_digest;
  PairValidation validation;
  std::size_t raw_types = 0, raw_behaviors = 0, saturation_steps = 0;
  bool algebra_complete = false;
  std::size_t quotient_types = 0, quotient_behaviors = 0;
  bool graph_built = false;
  StrategyGraphStats graph;
  std::size_t cyclic_components = 0;
  std::uint64_t path_edge_violations = 0;
  std::optional<std::pair<StrategyNode, StrategyNode>> witness;
  Delta02Verdict verdict = Delta02Verdict::Unknown;
  std::string note;  // why the verdict is Unknown
  std::optional<AlternationIndex> alternation;
  std::optional<DelayedProbe> delayed;
  std::uint64_t seed = 0;
  Timings timings;

  /// recursive => survives every cap, FailsAt => not recursive.
  bool coherent() const;
};

struct Analysis {
  std::unique_ptr<AutomatonPair> pair;
  std::unique_ptr<AlgebraTables> algebra;
  std::unique_ptr<SyntacticAlgebra> quotient;  // null when the verdict is Unknown
  std::unique_ptr<StrategyGraph> graph;
  AnalysisReport report;
};

/// `algebra` replaces saturation when given; it must belong to the pair.
Analysis analyze(AutomatonPair pair, const AnalysisOptions& options = {},
                 std::optional<AlgebraTables> algebra = std::nullopt);

/// Verdict only: Unknown on an overlapping pair, an incomplete algebra or a
/// quotient too large to tabulate.
Delta02Verdict decide_delta02(const AutomatonPair& pair, std::size_t saturation_budget = 60000);

/// Stable JSON rendering; timings only when asked for.
std::string report_to_json(const AnalysisReport& r, bool with_timings = false);

}  // namespace wadge
