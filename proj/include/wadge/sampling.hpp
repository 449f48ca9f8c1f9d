#pragma once

// Seeded random generation of regular trees and contexts.

#include <cstdint>
#include <random>

#include "wadge/automaton.hpp"
#include "wadge/tree.hpp"

namespace wadge {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n).
inline std::size_t uniform(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// A random regular tree with at most max_nodes graph nodes. When finite is
/// set the graph is acyclic.
RegularTree random_tree(const AlphabetPtr& alphabet, Rng& rng, std::size_t max_nodes = 4, bool finite = false);

/// A random context: a spine of at most max_spine labelled nodes ending in
/// the port, with random side trees.
Context random_context(const AlphabetPtr& alphabet, Rng& rng, std::size_t max_spine = 3,
                       std::size_t max_side_nodes = 3, bool finite = false);

/// Random members of L(a, q): random productive transitions are unfolded to
/// a given depth, below which emptiness witnesses are plugged in.
class MemberSampler {
public:
  explicit MemberSampler(const ParityTreeAutomaton& a);

  /// nullopt when q is unproductive.
  std::optional<RegularTree> sample_from(StateId q, Rng& rng, unsigned depth = 4) const;
  /// Member of L(a) from a random productive initial state.
  std::optional<RegularTree> sample(Rng& rng, unsigned depth = 4) const;

private:
  ParityTreeAutomaton a_;
  std::vector<std::optional<RegularTree>> witnesses_;
};

}  // namespace wadge
