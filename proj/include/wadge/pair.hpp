#pragma once

// A language given together with an automaton for its complement.

#include <cstdint>
#include <optional>
#include <string>

#include "wadge/automaton.hpp"

namespace wadge {

enum class Soundness { Unchecked, DisjointnessVerified, FullyVerified };

std::string to_string(Soundness s);

struct AutomatonPair {
  ParityTreeAutomaton positive;
  ParityTreeAutomaton negative;
  Soundness soundness = Soundness::Unchecked;

  AutomatonPair(ParityTreeAutomaton pos, ParityTreeAutomaton neg);

  const AlphabetPtr& alphabet() const { return positive.alphabet(); }
  /// The complement language's pair, same soundness.
  AutomatonPair swapped() const;
};

struct PairValidation {
  bool disjoint = false;
  /// A tree accepted by both automata, when they overlap.
  std::optional<RegularTree> overlap;
  std::size_t samples = 0;
  /// Sampled trees accepted by neither automaton.
  std::size_t uncovered = 0;
  std::optional<RegularTree> uncovered_example;
  Soundness soundness = Soundness::Unchecked;
};

/// Disjointness by product emptiness, then coverage on `samples` seeded
/// random trees (half uniform, half drawn from either language). A pair is
/// FullyVerified when disjoint and every sample is covered.
PairValidation validate_pair(const AutomatonPair& pair, std::uint64_t seed = 0, std::size_t samples = 200);

/// Runs validate_pair and records the resulting soundness on the pair.
AutomatonPair validated(AutomatonPair pair, std::uint64_t seed = 0, std::size_t samples = 200);

}  // namespace wadge
