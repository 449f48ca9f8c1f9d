#include "wadge/acceptance.hpp"

#include <algorithm>
#include <map>

#include "wadge/errors.hpp"
#include "wadge/parity_game.hpp"

namespace wadge {

namespace {

// Two absorbing vertices shared by both game constructions.
struct Sinks {
  std::uint32_t win;
  std::uint32_t lose;
};

Sinks add_sinks(GameArena& g) {
  Sinks s{g.add_vertex(Player::Even, 0), g.add_vertex(Player::Even, 1)};
  g.add_edge(s.win, s.win);
  g.add_edge(s.lose, s.lose);
  return s;
}

}  // namespace

std::vector<Bitset> accepting_states_per_node(const RegularTree& t, const ParityTreeAutomaton& a) {
  if (!same_alphabet(t.alphabet(), a.alphabet()))
    throw AlphabetMismatch("tree and automaton use different alphabets");
  const std::size_t nq = a.state_count();
  const unsigned neutral = a.max_priority();
  GameArena g;
  const Sinks sinks = add_sinks(g);
  auto vid = [&](NodeId n, StateId q) { return static_cast<std::uint32_t>(2 + n * nq + q); };
  for (NodeId n = 0; n < t.size(); ++n)
    for (StateId q = 0; q < nq; ++q) g.add_vertex(Player::Even, a.priority(q));
  for (NodeId n = 0; n < t.size(); ++n) {
    const TreeNode& node = t.node(n);
    if (node.is_port()) throw TreeError("membership is undefined for trees with ports");
    for (StateId q = 0; q < nq; ++q) {
      const auto v = vid(n, q);
      const Moves& m = a.moves(q, node.label);
      bool any = false;
      switch (node.shape()) {
        case Shape::Leaf:
          if (m.leaf) g.add_edge(v, sinks.win), any = true;
          break;
        case Shape::LeftOnly:
          for (auto c : m.left_only) g.add_edge(v, vid(*node.left, c)), any = true;
          break;
        case Shape::RightOnly:
          for (auto c : m.right_only) g.add_edge(v, vid(*node.right, c)), any = true;
          break;
        case Shape::Binary:
          for (auto [l, r] : m.binary) {
            const auto o = g.add_vertex(Player::Odd, neutral);
            g.add_edge(o, vid(*node.left, l));
            g.add_edge(o, vid(*node.right, r));
            g.add_edge(v, o);
            any = true;
          }
          break;
      }
      if (!any) g.add_edge(v, sinks.lose);
    }
  }
  const GameSolution sol = solve_parity_game(g);
  std::vector<Bitset> out(t.size(), Bitset(nq));
  for (NodeId n = 0; n < t.size(); ++n)
    for (StateId q = 0; q < nq; ++q)
      if (sol.even_wins(vid(n, q))) out[n].set(q);
  return out;
}

Bitset accepting_states(const RegularTree& t, const ParityTreeAutomaton& a) {
  return accepting_states_per_node(t, a)[RegularTree::root()];
}

bool accepts(const ParityTreeAutomaton& a, const RegularTree& t) {
  const Bitset acc = accepting_states(t, a);
  for (auto q : a.initial_states())
    if (acc.test(q)) return true;
  return false;
}

namespace {

struct MoveChoice {
  Symbol label;
  Shape shape;
  StateId left = 0;
  StateId right = 0;
};

struct EmptinessGame {
  GameArena arena;
  std::vector<MoveChoice> choice;  // indexed by option vertex - first_option
  std::uint32_t first_option = 0;
  GameSolution solution;
};

// Even (the automaton) picks a transition, Odd (the pathfinder) a direction.
EmptinessGame emptiness_game(const ParityTreeAutomaton& a) {
  EmptinessGame e;
  GameArena& g = e.arena;
  const Sinks sinks = add_sinks(g);
  const std::size_t nq = a.state_count();
  const unsigned neutral = a.max_priority();
  for (StateId q = 0; q < nq; ++q) g.add_vertex(Player::Even, a.priority(q));
  e.first_option = static_cast<std::uint32_t>(g.size());
  auto option = [&](StateId q, MoveChoice c) {
    const auto o = g.add_vertex(Player::Odd, neutral);
    e.choice.push_back(c);
    g.add_edge(2 + q, o);
    return o;
  };
  for (StateId q = 0; q < nq; ++q) {
    for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
      const Moves& m = a.moves(q, s);
      if (m.leaf) g.add_edge(option(q, {s, Shape::Leaf}), sinks.win);
      for (auto c : m.left_only) g.add_edge(option(q, {s, Shape::LeftOnly, c, 0}), 2 + c);
      for (auto c : m.right_only) g.add_edge(option(q, {s, Shape::RightOnly, 0, c}), 2 + c);
      for (auto [l, r] : m.binary) {
        const auto o = option(q, {s, Shape::Binary, l, r});
        g.add_edge(o, 2 + l);
        g.add_edge(o, 2 + r);
      }
    }
    if (g.successors(2 + q).empty()) g.add_edge(2 + q, sinks.lose);
  }
  e.solution = solve_parity_game(g);
  return e;
}

RegularTree witness_from(const ParityTreeAutomaton& a, const EmptinessGame& e, StateId start) {
  std::map<StateId, NodeId> node_of;
  std::vector<StateId> order{start};
  node_of[start] = 0;
  std::vector<TreeNode> nodes(1);
  auto node_for = [&](StateId q) {
    auto [it, fresh] = node_of.emplace(q, static_cast<NodeId>(nodes.size()));
    if (fresh) {
      nodes.emplace_back();
      order.push_back(q);
    }
    return it->second;
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId q = order[i];
    const auto o = e.solution.strategy[2 + q];
    const MoveChoice c = e.choice.at(o - e.first_option);
    TreeNode n;
    n.label = c.label;
    if (c.shape == Shape::LeftOnly || c.shape == Shape::Binary) n.left = node_for(c.left);
    if (c.shape == Shape::RightOnly || c.shape == Shape::Binary) n.right = node_for(c.right);
    nodes[node_of[q]] = n;
  }
  (void)a;
  return RegularTree(a.alphabet(), std::move(nodes), 0);
}

}  // namespace

EmptinessResult check_emptiness(const ParityTreeAutomaton& a) {
  const EmptinessGame e = emptiness_game(a);
  for (auto q : a.initial_states())
    if (e.solution.even_wins(2 + q)) return EmptinessResult{false, witness_from(a, e, q)};
  return EmptinessResult{true, std::nullopt};
}

Bitset productive_states(const ParityTreeAutomaton& a) {
  const EmptinessGame e = emptiness_game(a);
  Bitset out(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q)
    if (e.solution.even_wins(2 + q)) out.set(q);
  return out;
}

std::vector<std::optional<RegularTree>> state_witnesses(const ParityTreeAutomaton& a) {
  const EmptinessGame e = emptiness_game(a);
  std::vector<std::optional<RegularTree>> out(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q)
    if (e.solution.even_wins(2 + q)) out[q] = witness_from(a, e, q);
  return out;
}

namespace {

// Keeps the states in `keep` (in order) and the transitions among them.
ParityTreeAutomaton restrict_to(const ParityTreeAutomaton& a, const std::vector<StateId>& keep,
                                const std::vector<unsigned>& priority_map) {
  std::vector<std::optional<StateId>> id(a.state_count());
  ParityTreeAutomaton out(a.alphabet());
  for (auto q : keep) id[q] = out.add_state(a.name(q), priority_map[a.priority(q)], a.is_initial(q));
  for (auto q : keep) {
    for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
      const Moves& m = a.moves(q, s);
      if (m.leaf) out.add_leaf(*id[q], s);
      for (auto c : m.left_only)
        if (id[c]) out.add_left(*id[q], s, *id[c]);
      for (auto c : m.right_only)
        if (id[c]) out.add_right(*id[q], s, *id[c]);
      for (auto [l, r] : m.binary)
        if (id[l] && id[r]) out.add_binary(*id[q], s, *id[l], *id[r]);
    }
  }
  return out;
}

}  // namespace

ParityTreeAutomaton reduce(const ParityTreeAutomaton& a) {
  const Bitset productive = productive_states(a);

  // Reachability from initial states through transitions into productive states.
  std::vector<char> seen(a.state_count(), 0);
  std::vector<StateId> stack;
  for (auto q : a.initial_states())
    if (productive.test(q)) seen[q] = 1, stack.push_back(q);
  while (!stack.empty()) {
    const StateId q = stack.back();
    stack.pop_back();
    auto visit = [&](StateId c) {
      if (!seen[c]) seen[c] = 1, stack.push_back(c);
    };
    for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
      const Moves& m = a.moves(q, s);
      for (auto c : m.left_only)
        if (productive.test(c)) visit(c);
      for (auto c : m.right_only)
        if (productive.test(c)) visit(c);
      for (auto [l, r] : m.binary)
        if (productive.test(l) && productive.test(r)) visit(l), visit(r);
    }
  }
  std::vector<StateId> keep;
  for (StateId q = 0; q < a.state_count(); ++q)
    if (seen[q]) keep.push_back(q);
  if (keep.empty()) return empty_automaton(a.alphabet());

  // Priority compression: monotone, parity preserving, starting at 0 or 1.
  std::vector<unsigned> used;
  for (auto q : keep) used.push_back(a.priority(q));
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<unsigned> pmap(a.max_priority() + 1, 0);
  unsigned cur = used.front() % 2;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (i > 0 && used[i] % 2 != used[i - 1] % 2) ++cur;
    pmap[used[i]] = cur;
  }
  const ParityTreeAutomaton trimmed = restrict_to(a, keep, pmap);

  // Bisimulation quotient by partition refinement.
  const std::size_t n = trimmed.state_count();
  const auto nsym = static_cast<Symbol>(trimmed.alphabet()->size());
  std::vector<std::uint32_t> cls(n);
  for (StateId q = 0; q < n; ++q) cls[q] = trimmed.priority(q);
  std::size_t classes = 0;
  while (true) {
    using Sig = std::vector<std::int64_t>;
    std::map<Sig, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (StateId q = 0; q < n; ++q) {
      Sig sig{cls[q]};
      for (Symbol s = 0; s < nsym; ++s) {
        const Moves& m = trimmed.moves(q, s);
        std::vector<std::int64_t> lo, ro, bi;
        for (auto c : m.left_only) lo.push_back(cls[c]);
        for (auto c : m.right_only) ro.push_back(cls[c]);
        for (auto [l, r] : m.binary) bi.push_back(static_cast<std::int64_t>(cls[l]) * (1 << 20) + cls[r]);
        for (auto* v : {&lo, &ro, &bi}) {
          std::sort(v->begin(), v->end());
          v->erase(std::unique(v->begin(), v->end()), v->end());
        }
        sig.push_back(-1 - s);
        sig.push_back(m.leaf ? 1 : 0);
        sig.push_back(-100);
        sig.insert(sig.end(), lo.begin(), lo.end());
        sig.push_back(-101);
        sig.insert(sig.end(), ro.begin(), ro.end());
        sig.push_back(-102);
        sig.insert(sig.end(), bi.begin(), bi.end());
      }
      next[q] = ids.emplace(std::move(sig), static_cast<std::uint32_t>(ids.size())).first->second;
    }
    const bool stable = ids.size() == classes;
    classes = ids.size();
    cls = std::move(next);
    if (stable) break;
  }
  // Renumber classes by first member so the output order follows the input.
  std::vector<std::optional<StateId>> rep(classes);
  ParityTreeAutomaton out(trimmed.alphabet());
  std::vector<StateId> out_id(n);
  for (StateId q = 0; q < n; ++q) {
    if (!rep[cls[q]]) rep[cls[q]] = out.add_state(trimmed.name(q), trimmed.priority(q), false);
    out_id[q] = *rep[cls[q]];
    if (trimmed.is_initial(q)) out.set_initial(out_id[q]);
  }
  std::vector<char> emitted(classes, 0);
  for (StateId q = 0; q < n; ++q) {
    if (emitted[cls[q]]) continue;
    emitted[cls[q]] = 1;
    const StateId p = out_id[q];
    for (Symbol s = 0; s < nsym; ++s) {
      const Moves& m = trimmed.moves(q, s);
      if (m.leaf) out.add_leaf(p, s);
      for (auto c : m.left_only) out.add_left(p, s, out_id[c]);
      for (auto c : m.right_only) out.add_right(p, s, out_id[c]);
      for (auto [l, r] : m.binary) out.add_binary(p, s, out_id[l], out_id[r]);
    }
  }
  return out;
}

}  // namespace wadge
