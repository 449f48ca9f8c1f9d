#pragma once

// Membership and emptiness of parity tree automata, both decided by solving
// parity games.

#include <optional>
#include <vector>

#include "wadge/automaton.hpp"
#include "wadge/bitset.hpp"
#include "wadge/tree.hpp"

namespace wadge {

/// For every graph node n of t, the states q such that t.n is accepted from q.
/// The tree must not contain ports.
std::vector<Bitset> accepting_states_per_node(const RegularTree& t, const ParityTreeAutomaton& a);

/// Acc(t): states from which the whole tree is accepted.
Bitset accepting_states(const RegularTree& t, const ParityTreeAutomaton& a);

bool accepts(const ParityTreeAutomaton& a, const RegularTree& t);

struct EmptinessResult {
  bool empty = true;
  std::optional<RegularTree> witness;
};

EmptinessResult check_emptiness(const ParityTreeAutomaton& a);

/// States with nonempty language.
Bitset productive_states(const ParityTreeAutomaton& a);

/// A witness tree for L(a, q) for every productive q (nullopt elsewhere).
std::vector<std::optional<RegularTree>> state_witnesses(const ParityTreeAutomaton& a);

/// Language-preserving simplification: drops unreachable and unproductive
/// states, compresses priorities and merges bisimilar states.
ParityTreeAutomaton reduce(const ParityTreeAutomaton& a);

}  // namespace wadge
