#pragma once

// Nondeterministic parity tree automata over partial binary trees.
//
// Acceptance is min-parity: a run is accepting iff on every infinite branch
// the minimum priority occurring infinitely often is even, and every leaf of
// the input is matched by a leaf transition. Nodes with a single child are
// read by the left-only / right-only tables, so a tree's shape is always
// checked exactly.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wadge/tree.hpp"

namespace wadge {

using StateId = std::uint32_t;

/// Outgoing transitions of one state on one symbol.
struct Moves {
  bool leaf = false;
  std::vector<StateId> left_only;
  std::vector<StateId> right_only;
  std::vector<std::pair<StateId, StateId>> binary;

  bool empty() const { return !leaf && left_only.empty() && right_only.empty() && binary.empty(); }
  friend bool operator==(const Moves&, const Moves&) = default;
};

class ParityTreeAutomaton {
public:
  explicit ParityTreeAutomaton(AlphabetPtr alphabet);

  StateId add_state(std::string name, unsigned priority, bool initial = false);
  void set_initial(StateId q, bool initial = true);

  void add_leaf(StateId q, Symbol a);
  void add_left(StateId q, Symbol a, StateId child);
  void add_right(StateId q, Symbol a, StateId child);
  void add_binary(StateId q, Symbol a, StateId left, StateId right);
  /// Adds the transition for `shape` (children ignored when not needed).
  void add_shaped(StateId q, Symbol a, Shape shape, StateId left, StateId right);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t state_count() const { return names_.size(); }
  const std::string& name(StateId q) const { return names_.at(q); }
  unsigned priority(StateId q) const { return priorities_.at(q); }
  bool is_initial(StateId q) const { return initial_.at(q); }
  std::vector<StateId> initial_states() const;
  const Moves& moves(StateId q, Symbol a) const { return moves_[index(q, a)]; }
  unsigned max_priority() const;
  std::size_t transition_count() const;

  /// Looks a state up by name.
  std::optional<StateId> find_state(std::string_view name) const;

  friend bool operator==(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b) {
    return *a.alphabet_ == *b.alphabet_ && a.names_ == b.names_ && a.priorities_ == b.priorities_ &&
           a.initial_ == b.initial_ && a.moves_ == b.moves_;
  }

private:
  std::size_t index(StateId q, Symbol a) const {
    return static_cast<std::size_t>(q) * alphabet_->size() + static_cast<std::size_t>(a);
  }
  void check(StateId q, Symbol a) const;

  AlphabetPtr alphabet_;
  std::vector<std::string> names_;
  std::vector<unsigned> priorities_;
  std::vector<bool> initial_;
  std::vector<Moves> moves_;
};

ParityTreeAutomaton parse_automaton(std::string_view text);
std::string to_text(const ParityTreeAutomaton& automaton);

/// Accepts every tree over the alphabet.
ParityTreeAutomaton universal_automaton(AlphabetPtr alphabet);
/// Accepts nothing.
ParityTreeAutomaton empty_automaton(AlphabetPtr alphabet);

/// Disjoint union; initial states of both are kept (language union).
ParityTreeAutomaton disjoint_union(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b);

/// Same automaton read over a larger alphabet; new symbols have no
/// transitions. Symbols are matched by name.
ParityTreeAutomaton widen_alphabet(const ParityTreeAutomaton& a, AlphabetPtr wider);

/// Every SCC of the state graph uses priorities of a single parity.
bool is_weak(const ParityTreeAutomaton& a);

/// Automaton for L(a) ∩ L(b). Weak operands give a weak product over
/// priorities {0,1}; in general the two parity conditions are merged by a
/// deterministic parity monitor carried in the product state.
ParityTreeAutomaton product(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b);

/// Copies every state of `src` into `dst` with a name prefix; returns the
/// id offset of the copy. Symbols are matched by name.
StateId copy_into(ParityTreeAutomaton& dst, const ParityTreeAutomaton& src, const std::string& prefix,
                  bool keep_initial);

/// Same automaton with a different initial set.
ParityTreeAutomaton with_initial(const ParityTreeAutomaton& a, const std::vector<StateId>& initial);

}  // namespace wadge
