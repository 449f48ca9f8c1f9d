#pragma once

// Trees, prefixes and contexts over a finite alphabet.
//
// Every tree is a finite rooted graph whose unfolding from the root is a
// partial binary tree {0,1}* -> A. Nodes may have no child, only a left
// child, only a right child, or both. Ports are leaves carrying the
// reserved label kPortSymbol.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wadge {

using Symbol = std::int32_t;
using NodeId = std::uint32_t;

inline constexpr Symbol kPortSymbol = -1;
inline constexpr std::string_view kPortLabel = "*";

class Alphabet {
public:
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& name(Symbol s) const { return symbols_.at(static_cast<std::size_t>(s)); }
  std::optional<Symbol> find(std::string_view name) const;
  Symbol at(std::string_view name) const;
  const std::vector<std::string>& symbols() const { return symbols_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
  std::vector<std::string> symbols_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> symbols);
bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b);

enum class Shape : std::uint8_t { Leaf, LeftOnly, RightOnly, Binary };

struct TreeNode {
  Symbol label = 0;
  std::optional<NodeId> left;
  std::optional<NodeId> right;

  Shape shape() const {
    if (left && right) return Shape::Binary;
    if (left) return Shape::LeftOnly;
    if (right) return Shape::RightOnly;
    return Shape::Leaf;
  }
  bool is_port() const { return label == kPortSymbol; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class TreeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A finite rooted graph presenting a regular (possibly infinite) tree.
/// Construction prunes unreachable nodes and renumbers nodes in
/// breadth-first order from the root, so two structurally equal graphs
/// compare equal.
class RegularTree {
public:
  /// When old_to_new is given it receives, for every input node, its id in
  /// the normalized graph (nullopt when pruned).
  RegularTree(AlphabetPtr alphabet, std::vector<TreeNode> nodes, NodeId root,
              std::vector<std::optional<NodeId>>* old_to_new = nullptr);

  static RegularTree single_leaf(AlphabetPtr alphabet, Symbol label);
  static RegularTree single_port(AlphabetPtr alphabet);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(NodeId n) const { return nodes_.at(n); }
  std::size_t size() const { return nodes_.size(); }
  static constexpr NodeId root() { return 0; }

  bool is_acyclic() const;
  /// Number of ports in the unfolding, saturated at 2 (2 means "two or more",
  /// including infinitely many).
  unsigned unfolded_port_count() const;
  bool has_ports() const;

  friend bool operator==(const RegularTree& a, const RegularTree& b) {
    return *a.alphabet_ == *b.alphabet_ && a.nodes_ == b.nodes_;
  }

private:
  AlphabetPtr alphabet_;
  std::vector<TreeNode> nodes_;
};

/// A finite multi-context: acyclic, every node has a single parent.
class Prefix {
public:
  explicit Prefix(RegularTree tree);

  const RegularTree& tree() const { return tree_; }
  /// Port nodes in increasing node order.
  const std::vector<NodeId>& ports() const { return ports_; }

private:
  RegularTree tree_;
  std::vector<NodeId> ports_;
};

/// A regular multi-context with exactly one port in its unfolding.
class Context {
public:
  explicit Context(RegularTree tree);

  static Context identity(AlphabetPtr alphabet);

  const RegularTree& tree() const { return tree_; }
  NodeId port() const { return port_; }
  /// Graph nodes on the root-to-port path, root first, port last.
  const std::vector<NodeId>& spine() const { return spine_; }
  /// Direction taken at spine()[i] towards spine()[i+1]: 0 = left, 1 = right.
  const std::vector<int>& directions() const { return directions_; }
  bool is_identity() const { return spine_.size() == 1; }

private:
  RegularTree tree_;
  NodeId port_ = 0;
  std::vector<NodeId> spine_;
  std::vector<int> directions_;
};

/// c[eta]: every port of the prefix replaced by the tree assigned to it.
RegularTree plug(const Prefix& prefix, const std::map<NodeId, RegularTree>& assignment);
/// c[t] for a context.
RegularTree plug(const Context& context, const RegularTree& tree);
/// Context composition: outer's port replaced by inner.
Context compose(const Context& outer, const Context& inner);

/// t.n for a graph node.
RegularTree subtree(const RegularTree& tree, NodeId node);
/// t.w for a word over {0,1}; throws TreeError if w is not a node.
RegularTree subtree_at(const RegularTree& tree, std::string_view word);
/// Graph node reached by a word, if any.
std::optional<NodeId> node_at(const RegularTree& tree, std::string_view word);

struct LevelCut {
  Prefix prefix;
  /// For every port of the prefix, the graph node of the original tree that
  /// sits at that position.
  std::map<NodeId, NodeId> origin;
};

/// The tree truncated below depth d: every node at depth d becomes a port.
LevelCut level_prefix(const RegularTree& tree, unsigned depth);

/// v^infinity: the port is identified with the root.
RegularTree omega_power(const Context& context);

/// Exact equality of unfoldings (bisimulation on the node graphs). When
/// max_depth is given only positions of depth < max_depth are compared.
bool same_unfolding(const RegularTree& a, const RegularTree& b,
                    std::optional<unsigned> max_depth = std::nullopt);

/// Graph-level union helper: copies `tree` into `nodes`, returns the new id
/// of its root.
NodeId append_graph(std::vector<TreeNode>& nodes, const RegularTree& tree);

std::string to_text(const RegularTree& tree);
RegularTree parse_tree(std::string_view text, AlphabetPtr alphabet);

}  // namespace wadge
