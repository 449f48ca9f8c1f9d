#pragma once

// Type trees and strategy trees over regular supports.
//
// Labels are type ids of an AlgebraTables and are indexed by the graph
// nodes of the support in its canonical numbering (the order printed by
// to_text).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wadge/algebra.hpp"
#include "wadge/tree.hpp"

namespace wadge {

struct TypeTree {
  std::vector<std::uint32_t> labels;  // per graph node
};

/// Each graph node labelled with the type of its subtree. Throws
/// std::runtime_error if some subtree has a type missing from the algebra.
TypeTree induced_type_tree(const RegularTree& t, const AlgebraTables& alg);

struct Consistency {
  bool ok = true;
  std::optional<NodeId> node;  // first failing node
};

/// Leaf and internal-node clauses against the algebra tables. Throws
/// std::invalid_argument when the label count differs from the node count.
Consistency check_local_consistency(const TypeTree& sigma, const RegularTree& t, const AlgebraTables& alg);

struct StrategyTree {
  RegularTree support;
  std::vector<TypeTree> layers;
};

struct StrategyCheck {
  bool valid = true;
  std::string reason;          // first violated clause, empty when valid
  std::optional<NodeId> node;  // where it was violated
  std::size_t games = 0;       // distinct type sequences solved
};

/// sigma_1 = sigma_t, local consistency of every layer, and at every graph
/// node a won cutting game on the node's type sequence.
StrategyCheck check_strategy_tree(const StrategyTree& s, const AlgebraTables& alg);

/// Number of i with sigma_i(root) != sigma_{i+1}(root).
unsigned root_alternation(const StrategyTree& s);
/// Largest alternation at a node repeated infinitely often in the unfolding,
/// that is a node reachable from a cycle; 0 for a finite support.
unsigned limit_alternation(const StrategyTree& s);

/// {"support": <tree text>, "layers": [[type id per node], ...]}
StrategyTree parse_strategy_tree(const std::string& json, const AlphabetPtr& alphabet);
std::string strategy_tree_to_json(const StrategyTree& s);

}  // namespace wadge
