#pragma once

// Independent reference implementations used only by tests.

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "wadge/automaton.hpp"
#include "wadge/parity_game.hpp"

namespace oracle {

using namespace wadge;

/// With every vertex of `fixed` restricted to choice[v], does every cycle
/// reachable from `from` have a least priority of the parity of `p`?
inline bool all_cycles_good(const GameArena& g, const std::vector<int>& choice, Player p, std::uint32_t from) {
  const std::size_t n = g.size();
  auto succ = [&](std::uint32_t v) {
    std::vector<std::uint32_t> out;
    if (choice[v] >= 0)
      out.push_back(g.successors(v)[choice[v]]);
    else
      out = g.successors(v);
    return out;
  };
  std::vector<char> reach(n, 0);
  std::vector<std::uint32_t> stack{from};
  reach[from] = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : succ(v))
      if (!reach[w]) reach[w] = 1, stack.push_back(w);
  }
  // A bad cycle: through some reachable u with wrong parity priority, using
  // vertices of priority >= prio(u) only.
  for (std::uint32_t u = 0; u < n; ++u) {
    if (!reach[u] || g.priority(u) % 2 == static_cast<unsigned>(p)) continue;
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> st;
    for (auto w : succ(u))
      if (g.priority(w) >= g.priority(u) && !seen[w]) seen[w] = 1, st.push_back(w);
    while (!st.empty()) {
      auto v = st.back();
      st.pop_back();
      if (v == u) return false;
      for (auto w : succ(v))
        if (g.priority(w) >= g.priority(u) && !seen[w]) seen[w] = 1, st.push_back(w);
    }
  }
  return true;
}

/// Even wins from v iff some memoryless Even strategy makes every reachable
/// cycle even.
inline std::vector<bool> brute_force_winners(const GameArena& g) {
  const std::size_t n = g.size();
  std::vector<bool> win(n, false);
  std::vector<int> choice(n, -1);
  std::vector<std::uint32_t> even;
  for (std::uint32_t v = 0; v < n; ++v)
    if (g.owner(v) == Player::Even) even.push_back(v), choice[v] = 0;
  while (true) {
    for (std::uint32_t v = 0; v < n; ++v)
      if (!win[v] && all_cycles_good(g, choice, Player::Even, v)) win[v] = true;
    std::size_t i = 0;
    while (i < even.size()) {
      auto& c = choice[even[i]];
      if (++c < static_cast<int>(g.successors(even[i]).size())) break;
      c = 0;
      ++i;
    }
    if (i == even.size()) break;
  }
  return win;
}

/// The solver's strategy for the winner of v really wins from v.
inline bool strategy_wins(const GameArena& g, const GameSolution& sol, std::uint32_t v) {
  const Player w = sol.winner[v];
  std::vector<int> choice(g.size(), -1);
  for (std::uint32_t u = 0; u < g.size(); ++u) {
    if (g.owner(u) != w) continue;
    const auto& s = g.successors(u);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] == sol.strategy[u]) choice[u] = static_cast<int>(i);
  }
  return all_cycles_good(g, choice, w, v);
}

/// An automaton accepting exactly the unfolding of t.
inline ParityTreeAutomaton tree_automaton(const RegularTree& t) {
  ParityTreeAutomaton a(t.alphabet());
  for (NodeId n = 0; n < t.size(); ++n) a.add_state("n" + std::to_string(n), 0, n == 0);
  for (NodeId n = 0; n < t.size(); ++n) {
    const auto& node = t.node(n);
    a.add_shaped(n, node.label, node.shape(), node.left.value_or(0), node.right.value_or(0));
  }
  return a;
}

}  // namespace oracle

namespace oracle {

/// A random automaton with every state initial with probability 1/2.
inline ParityTreeAutomaton random_automaton(const AlphabetPtr& ab, std::mt19937_64& rng, unsigned states,
                                            unsigned max_priority, unsigned moves) {
  ParityTreeAutomaton a(ab);
  for (unsigned q = 0; q < states; ++q)
    a.add_state("q" + std::to_string(q), static_cast<unsigned>(rng() % (max_priority + 1)), q == 0 || rng() % 2);
  for (unsigned i = 0; i < moves; ++i) {
    const auto q = static_cast<StateId>(rng() % states);
    const auto s = static_cast<Symbol>(rng() % ab->size());
    const auto l = static_cast<StateId>(rng() % states), r = static_cast<StateId>(rng() % states);
    a.add_shaped(q, s, static_cast<Shape>(rng() % 4), l, r);
  }
  return a;
}

}  // namespace oracle

namespace oracle {

/// Explicit finite trees and prefixes for exhaustive game search.
struct FTree {
  int label = 0;  // -1 for a port
  std::shared_ptr<const FTree> left, right;
};
using FTreePtr = std::shared_ptr<const FTree>;

inline FTreePtr make_node(int label, FTreePtr l, FTreePtr r) {
  auto n = std::make_shared<FTree>();
  n->label = label;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

inline std::string key(const FTreePtr& t) {
  if (!t) return "-";
  if (t->label < 0) return "*";
  return std::to_string(t->label) + "(" + key(t->left) + "," + key(t->right) + ")";
}

/// All finite trees over `letters` letters with at most `levels` levels.
inline std::vector<FTreePtr> all_trees(int letters, unsigned levels) {
  std::vector<FTreePtr> out;
  if (levels == 0) return out;
  const auto sub = all_trees(letters, levels - 1);
  for (int a = 0; a < letters; ++a) {
    out.push_back(make_node(a, nullptr, nullptr));
    for (const auto& s : sub) {
      out.push_back(make_node(a, s, nullptr));
      out.push_back(make_node(a, nullptr, s));
    }
    for (const auto& l : sub)
      for (const auto& r : sub) out.push_back(make_node(a, l, r));
  }
  return out;
}

/// Every prefix of a finite tree: each node is kept or, when its parent is
/// kept, cut into a port.
inline std::vector<FTreePtr> all_prefixes(const FTreePtr& t) {
  std::vector<FTreePtr> out{make_node(-1, nullptr, nullptr)};
  std::vector<FTreePtr> ls{nullptr}, rs{nullptr};
  if (t->left) ls = all_prefixes(t->left);
  if (t->right) rs = all_prefixes(t->right);
  for (const auto& l : ls)
    for (const auto& r : rs) out.push_back(make_node(t->label, l, r));
  return out;
}

inline bool extends(const FTreePtr& t, const FTreePtr& p) {
  if (p->label < 0) return true;
  if (t->label != p->label || !t->left != !p->left || !t->right != !p->right) return false;
  return (!t->left || extends(t->left, p->left)) && (!t->right || extends(t->right, p->right));
}

inline RegularTree to_regular(const FTreePtr& t, const AlphabetPtr& ab) {
  std::vector<TreeNode> nodes;
  std::function<NodeId(const FTreePtr&)> go = [&](const FTreePtr& n) {
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back({});
    nodes[id].label = n->label < 0 ? kPortSymbol : n->label;
    if (n->left) {
      const auto c = go(n->left);
      nodes[id].left = c;
    }
    if (n->right) {
      const auto c = go(n->right);
      nodes[id].right = c;
    }
    return id;
  };
  go(t);
  return RegularTree(ab, std::move(nodes), 0);
}

/// An automaton for a finite set of finite trees.
inline ParityTreeAutomaton finite_language(const std::vector<FTreePtr>& ts, const AlphabetPtr& ab) {
  ParityTreeAutomaton a = empty_automaton(ab);
  for (const auto& t : ts) a = disjoint_union(a, tree_automaton(to_regular(t, ab)));
  return a;
}

/// Exhaustive search of H^p_k(L_1, ..., L_k) over finite languages.
class GameSearch {
public:
  explicit GameSearch(std::vector<std::vector<FTreePtr>> languages) : langs_(std::move(languages)) {}

  /// Can Alternator survive rounds i..k from prefix p?
  bool wins(std::size_t i, const FTreePtr& p) {
    if (i == langs_.size()) return true;
    const auto k = std::to_string(i) + ":" + key(p);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    bool win = false;
    for (const auto& t : langs_[i]) {
      if (!extends(t, p)) continue;
      bool all = true;
      for (const auto& q : all_prefixes(t))
        if (!wins(i + 1, q)) {
          all = false;
          break;
        }
      if (all) {
        win = true;
        break;
      }
    }
    return memo_[k] = win;
  }

private:
  std::vector<std::vector<FTreePtr>> langs_;
  std::map<std::string, bool> memo_;
};

}  // namespace oracle
