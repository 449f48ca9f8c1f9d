#include "wadge/sampling.hpp"

#include "wadge/acceptance.hpp"

namespace wadge {

RegularTree random_tree(const AlphabetPtr& alphabet, Rng& rng, std::size_t max_nodes, bool finite) {
  const std::size_t n = 1 + uniform(rng, max_nodes);
  std::vector<TreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode& node = nodes[i];
    node.label = static_cast<Symbol>(uniform(rng, alphabet->size()));
    const std::size_t lo = finite ? i + 1 : 0;
    if (lo >= n) continue;
    auto pick = [&] { return static_cast<NodeId>(lo + uniform(rng, n - lo)); };
    switch (uniform(rng, 4)) {
      case 0: break;
      case 1: node.left = pick(); break;
      case 2: node.right = pick(); break;
      default:
        node.left = pick();
        node.right = pick();
    }
  }
  return RegularTree(alphabet, std::move(nodes), 0);
}

Context random_context(const AlphabetPtr& alphabet, Rng& rng, std::size_t max_spine, std::size_t max_side_nodes,
                       bool finite) {
  const std::size_t len = uniform(rng, max_spine + 1);
  std::vector<TreeNode> nodes(len + 1);
  nodes[len].label = kPortSymbol;
  for (std::size_t i = 0; i < len; ++i) {
    const Symbol label = static_cast<Symbol>(uniform(rng, alphabet->size()));
    const bool go_left = uniform(rng, 2) == 0;
    std::optional<NodeId> side;
    if (uniform(rng, 3) != 0) side = append_graph(nodes, random_tree(alphabet, rng, max_side_nodes, finite));
    TreeNode& node = nodes[i];
    node.label = label;
    (go_left ? node.left : node.right) = static_cast<NodeId>(i + 1);
    (go_left ? node.right : node.left) = side;
  }
  return Context(RegularTree(alphabet, std::move(nodes), 0));
}

MemberSampler::MemberSampler(const ParityTreeAutomaton& a) : a_(a), witnesses_(state_witnesses(a)) {}

std::optional<RegularTree> MemberSampler::sample_from(StateId q, Rng& rng, unsigned depth) const {
  if (!witnesses_.at(q)) return std::nullopt;
  std::vector<TreeNode> nodes;
  struct Move {
    Symbol label;
    Shape shape;
    StateId l, r;
  };
  auto expand = [&](auto&& self, StateId s, unsigned d) -> NodeId {
    std::vector<Move> moves;
    if (d > 0) {
      for (Symbol x = 0; x < static_cast<Symbol>(a_.alphabet()->size()); ++x) {
        const Moves& m = a_.moves(s, x);
        if (m.leaf) moves.push_back({x, Shape::Leaf, 0, 0});
        for (auto c : m.left_only)
          if (witnesses_[c]) moves.push_back({x, Shape::LeftOnly, c, 0});
        for (auto c : m.right_only)
          if (witnesses_[c]) moves.push_back({x, Shape::RightOnly, 0, c});
        for (auto [l, r] : m.binary)
          if (witnesses_[l] && witnesses_[r]) moves.push_back({x, Shape::Binary, l, r});
      }
    }
    if (moves.empty()) return append_graph(nodes, *witnesses_[s]);
    const Move mv = moves[uniform(rng, moves.size())];
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(TreeNode{mv.label, std::nullopt, std::nullopt});
    if (mv.shape == Shape::LeftOnly || mv.shape == Shape::Binary) {
      const NodeId c = self(self, mv.l, d - 1);
      nodes[id].left = c;
    }
    if (mv.shape == Shape::RightOnly || mv.shape == Shape::Binary) {
      const NodeId c = self(self, mv.r, d - 1);
      nodes[id].right = c;
    }
    return id;
  };
  const NodeId root = expand(expand, q, depth);
  return RegularTree(a_.alphabet(), std::move(nodes), root);
}

std::optional<RegularTree> MemberSampler::sample(Rng& rng, unsigned depth) const {
  std::vector<StateId> live;
  for (auto q : a_.initial_states())
    if (witnesses_[q]) live.push_back(q);
  if (live.empty()) return std::nullopt;
  return sample_from(live[uniform(rng, live.size())], rng, depth);
}

}  // namespace wadge
