#pragma once

// Finite cutting games H^p_k(L_1, ..., L_k) solved through the closure chain
//   X_k = L_k,  X_i = L_i ∩ cl(X_{i+1}),
// where cl(X) is the set of trees whose every finite prefix extends to a
// member of X. Alternator wins iff X_1 has a member extending p.
//
// A tree-type constraint h stands for the trees t with pos(h) ⊆ Acc⁺(t) and
// neg(h) ⊆ Acc⁻(t). This contains the exact class of h and lies on the same
// side of L.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wadge/algebra.hpp"
#include "wadge/automaton.hpp"
#include "wadge/pair.hpp"
#include "wadge/tree.hpp"

namespace wadge {

/// cl(L(a)): the productive part of `a` read as a safety automaton.
ParityTreeAutomaton closure_automaton(const ParityTreeAutomaton& a);

/// Trees extending the prefix p (ports take any nonempty subtree).
ParityTreeAutomaton extensions_automaton(const Prefix& p);

/// Trees whose accepting-state sets contain those of the type.
ParityTreeAutomaton type_language(const AutomatonPair& pair, const TreeType& type);

struct RoundConstraint {
  enum class Kind : std::uint8_t { InL, NotInL, Type } kind = Kind::InL;
  std::uint32_t type = 0;  // type id of the algebra, Kind::Type only

  static RoundConstraint in_l() { return {Kind::InL, 0}; }
  static RoundConstraint not_in_l() { return {Kind::NotInL, 0}; }
  static RoundConstraint of_type(std::uint32_t h) { return {Kind::Type, h}; }
  friend bool operator==(const RoundConstraint&, const RoundConstraint&) = default;
};

struct CuttingGameSpec {
  /// Starting prefix; absent means the empty prefix (a single port).
  std::optional<Prefix> start;
  std::vector<RoundConstraint> sequence;

  /// L, L^c, L, ... of length k (or starting with L^c).
  static CuttingGameSpec alternating(unsigned k, bool start_in_l = true);
};

enum class GameWinner : std::uint8_t { Alternator, Constrainer };
std::string to_string(GameWinner w);

struct CuttingGameVerdict {
  GameWinner winner = GameWinner::Constrainer;
  /// Alternator: a member of X_1 extending the start prefix.
  std::optional<RegularTree> witness;
  /// Alternator: state count of the reduced X_1 automaton.
  std::size_t chain_states = 0;
  /// Constrainer: the least round m at which Alternator cannot move, that
  /// is the least m such that the game cut after m rounds is lost.
  std::optional<unsigned> fail_round;
};

/// Throws std::invalid_argument for a type constraint without an algebra or
/// an empty sequence.
CuttingGameVerdict solve_finite_game(const CuttingGameSpec& spec, const AutomatonPair& pair,
                                     const AlgebraTables* alg = nullptr);

/// The chain as automata, X_1 first. Every automaton is reduced.
std::vector<ParityTreeAutomaton> game_chain(const std::vector<ParityTreeAutomaton>& languages);

/// The alternating chains of a pair, extended on demand:
///   A_1 = L, B_1 = L^c, A_{j+1} = L ∩ cl(B_j), B_{j+1} = L^c ∩ cl(A_j).
/// A_j (B_j) is the winning set of the first move of the j-round game
/// that starts with L (L^c).
class AlternatingChains {
public:
  explicit AlternatingChains(const AutomatonPair& pair);
  const ParityTreeAutomaton& starting_in_l(unsigned j);
  const ParityTreeAutomaton& starting_out_of_l(unsigned j);
  bool empty_in_l(unsigned j);
  bool empty_out_of_l(unsigned j);

private:
  void extend(unsigned j);
  const AutomatonPair* pair_;
  std::vector<ParityTreeAutomaton> a_, b_;
  std::vector<char> a_empty_, b_empty_;
};

struct AlternationIndex {
  /// Least k with Constrainer winning H_k(L, L^c, ...); absent = survives.
  std::optional<unsigned> fails_at;
  unsigned cap = 0;
  bool survives() const { return !fails_at; }
};

/// Throws std::invalid_argument for cap 0 and std::logic_error when the
/// chain is not antitone.
AlternationIndex alternation_index(const AutomatonPair& pair, unsigned cap);
AlternationIndex alternation_index(AlternatingChains& chains, unsigned cap);

struct DelayedProbe {
  /// Least stage k at which no t in L has all its prefixes winnable in
  /// H_k(L^c, L, ...); stage 0 means L itself is empty. Absent = survives.
  std::optional<unsigned> constrainer_wins_at;
  unsigned cap = 0;
  std::optional<RegularTree> witness;  // a surviving t at the last stage
  bool survives() const { return !constrainer_wins_at; }
};

DelayedProbe delayed_game_probe(const AutomatonPair& pair, unsigned cap);
DelayedProbe delayed_game_probe(AlternatingChains& chains, unsigned cap);

/// JSON form of a game spec:
/// {"start": <tree text or null>, "sequence": ["L", "coL", {"type": 3}, ...]}
CuttingGameSpec parse_game_spec(const std::string& json, const AlphabetPtr& alphabet);
std::string game_spec_to_json(const CuttingGameSpec& spec);
std::string verdict_to_json(const CuttingGameVerdict& v);

}  // namespace wadge
