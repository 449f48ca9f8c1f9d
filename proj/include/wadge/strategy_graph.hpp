#pragma once

// The strategy graph on behaviors x tree types.
//
// An edge (v,h) -> (v',h') exists iff some tree of type h decomposes as a
// finite context of behavior v applied to a tree, and every finite prefix
// of it can be completed into a finite context of behavior v'. The target
// type never matters, so the graph is stored per source node as the set
// R(v,h) of reachable behaviors. R(v,h) is down-closed for the order
// w <= z iff w = z.u with u finite, and is kept as a list of generators.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wadge/bitset.hpp"
#include "wadge/syntactic.hpp"
#include "wadge/tree.hpp"

namespace wadge {

/// Behavior class and tree type class of the syntactic algebra.
struct StrategyNode {
  std::uint32_t behavior = 0;
  std::uint32_t type = 0;

  friend bool operator==(const StrategyNode&, const StrategyNode&) = default;
  friend auto operator<=>(const StrategyNode&, const StrategyNode&) = default;
};

/// F: types reachable by filling every port with a finite tree; G: behaviors
/// reachable by filling all ports but one and plugging a finite context into
/// the remaining one.
struct PrefixSummary {
  Bitset types;
  Bitset behaviors;
};

/// Bottom-up summary of a finite prefix. Throws TreeError on a cyclic tree.
PrefixSummary prefix_summary(const RegularTree& prefix, const SyntacticAlgebra& alg);
/// The limit of the level-prefix summaries of a regular tree, at every graph
/// node.
std::vector<PrefixSummary> limit_summary(const RegularTree& tree, const SyntacticAlgebra& alg);

struct StrategyGraphStats {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  std::uint64_t sccs = 0;
  std::uint64_t cyclic_nodes = 0;
  std::size_t closure_pairs = 0;  // (exact type, closure type) pairs
  std::size_t path_pairs = 0;     // (exact, closure) context pairs
  std::size_t limit_pairs = 0;    // (tree type, branch limit) pairs
};

class StrategyGraph {
public:
  static StrategyGraph build(const SyntacticAlgebra& alg);

  const SyntacticAlgebra& algebra() const { return *alg_; }
  std::uint32_t behavior_count() const { return nv_; }
  std::uint32_t type_count() const { return nh_; }

  bool edge(StrategyNode src, StrategyNode dst) const;
  /// Down-closed set of target behaviors of a node.
  Bitset targets(StrategyNode src) const;
  /// w <= z: w is z followed by some finite context.
  bool below(std::uint32_t w, std::uint32_t z) const { return down_[z].test(w); }

  /// Component id of a node; nodes not on a cycle get their own id.
  std::uint64_t component(StrategyNode n) const;
  bool on_cycle(StrategyNode n) const;
  /// Cycle-carrying components: their nodes, sorted by (behavior, type).
  const std::vector<std::vector<StrategyNode>>& cyclic_components() const { return cyclic_; }

  bool recursive() const { return witness_.has_value(); }
  /// Two nodes of one component with distinct types.
  const std::optional<std::pair<StrategyNode, StrategyNode>>& witness() const { return witness_; }

  /// Pairs (n, n') joined by a path of length two but not by an edge. Zero
  /// exactly when every path implies an edge.
  std::uint64_t path_edge_violations() const { return violations_; }

  const StrategyGraphStats& stats() const { return stats_; }

  /// Graphviz rendering. With more than max_nodes nodes only cyclic nodes
  /// are drawn, up to max_nodes of them.
  std::string to_dot(std::size_t max_nodes = 400) const;

private:
  std::size_t index(StrategyNode n) const { return std::size_t{n.behavior} * nh_ + n.type; }

  const SyntacticAlgebra* alg_ = nullptr;
  std::uint32_t nv_ = 0, nh_ = 0;
  std::vector<Bitset> down_;
  std::vector<std::vector<std::uint32_t>> gens_;  // per node
  std::vector<std::uint32_t> vcomp_;              // behavior -> component of the behavior graph
  std::vector<bool> cyclic_node_;
  std::vector<std::uint32_t> cyclic_id_;          // behavior component -> index into cyclic_, or kNone
  std::vector<std::vector<StrategyNode>> cyclic_;
  std::optional<std::pair<StrategyNode, StrategyNode>> witness_;
  std::uint64_t violations_ = 0;
  StrategyGraphStats stats_;
};

}  // namespace wadge
