#pragma once

// Duparc's canonical languages and operations, emitted as automaton pairs.
//
// Every constructor works over one shared alphabet: the base letters a, b
// and the reserved letters @a (arrow), @b (sup), @l and @r (disjoint union
// tags). Operands therefore never collide with the fresh letters.

#include <optional>
#include <string>
#include <vector>

#include "wadge/pair.hpp"

namespace wadge {

AlphabetPtr corpus_alphabet();

/// Ordinal parameters are 1..8 or kOmega.
inline constexpr unsigned kOmega = 0;

/// All-a trees, a complete closed set ([1]^+), and its complement.
AutomatonPair base_closed();
AutomatonPair base_open();

/// t.0 in L and @a along all of 10*, or the first non-@a node 10^n on 10*
/// has t.10^n0 in M.
AutomatonPair arrow(const AutomatonPair& l, const AutomatonPair& m);
/// Root tag @l: t.0 in M. Root tag @r: t.0 not in M.
AutomatonPair plus_minus(const AutomatonPair& m);
/// M + L = L -> M^±.
AutomatonPair sum(const AutomatonPair& m, const AutomatonPair& l);
/// The first @b on 0* is at 0^k and t.0^k1 is in L_{k mod n}.
AutomatonPair sup_minus(const std::vector<AutomatonPair>& ls);
/// sup_minus, plus every tree with no @b on 1*.
AutomatonPair sup_plus(const std::vector<AutomatonPair>& ls);
/// L•1 = L, L•(n+1) = (L•n)+L; L•omega is sup_plus of the cyclic family
/// L•1, L•2.
AutomatonPair bullet(const AutomatonPair& l, unsigned alpha);
/// [alpha]^+ = base_closed • alpha; sign '-' swaps.
AutomatonPair canonical_set(unsigned alpha, char sign);

/// Some 0^n is a leaf, t(0^k) = a for k <= n and each t.0^k1 (1 <= k <= n)
/// is finite or has no b.
AutomatonPair omega_example();
/// Some t.0^n1 is in [3]^-.
AutomatonPair sigma2_complete();
/// Every t.0^n1 is in [3]^+.
AutomatonPair pi2_complete();
/// Negative control: the two automata share members.
AutomatonPair overlapping_pair();

struct CanonicalSpec {
  enum class Kind {
    Arrow,
    PlusMinus,
    Sum,
    SupMinus,
    SupPlus,
    Bullet,
    OmegaExample,
    Sigma2Complete,
    Pi2Complete,
    BaseClosed,
    BaseOpen
  } kind = Kind::BaseClosed;
  std::vector<CanonicalSpec> operands;
  unsigned alpha = 1;
  char sign = '+';
};

/// Throws std::invalid_argument on bad arity or ordinal.
AutomatonPair build(const CanonicalSpec& spec);

struct CorpusEntry {
  std::string name;
  CanonicalSpec spec;
  /// Expected membership in Delta^0_2; unset for the negative control.
  std::optional<bool> in_delta02;
  std::string description;
};

std::vector<CorpusEntry> corpus();
/// Throws std::invalid_argument for an unknown name.
CorpusEntry corpus_entry(const std::string& name);
/// Pair for a corpus entry; the negative control is not a CanonicalSpec.
AutomatonPair corpus_pair(const CorpusEntry& entry);

/// Writes <name>.pos.aut, <name>.neg.aut and <name>.manifest.json to dir.
void emit_corpus_entry(const CorpusEntry& entry, const std::string& dir, std::uint64_t seed = 0);

}  // namespace wadge
