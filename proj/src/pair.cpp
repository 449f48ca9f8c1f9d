#include "wadge/pair.hpp"

#include "wadge/acceptance.hpp"
#include "wadge/errors.hpp"
#include "wadge/sampling.hpp"

namespace wadge {

std::string to_string(Soundness s) {
  switch (s) {
    case Soundness::Unchecked: return "Unchecked";
    case Soundness::DisjointnessVerified: return "DisjointnessVerified";
    case Soundness::FullyVerified: return "FullyVerified";
  }
  return "Unchecked";
}

AutomatonPair::AutomatonPair(ParityTreeAutomaton pos, ParityTreeAutomaton neg)
    : positive(std::move(pos)), negative(std::move(neg)) {
  if (!same_alphabet(positive.alphabet(), negative.alphabet()))
    throw AlphabetMismatch("pair members use different alphabets");
}

AutomatonPair AutomatonPair::swapped() const {
  AutomatonPair out(negative, positive);
  out.soundness = soundness;
  return out;
}

PairValidation validate_pair(const AutomatonPair& pair, std::uint64_t seed, std::size_t samples) {
  PairValidation v;
  const EmptinessResult both = check_emptiness(product(pair.positive, pair.negative));
  v.disjoint = both.empty;
  v.overlap = both.witness;
  if (!v.disjoint) return v;
  Rng rng(seed);
  const MemberSampler pos(pair.positive), neg(pair.negative);
  for (std::size_t i = 0; i < samples; ++i) {
    std::optional<RegularTree> t;
    switch (i % 4) {
      case 0: t = random_tree(pair.alphabet(), rng, 5, false); break;
      case 1: t = random_tree(pair.alphabet(), rng, 6, true); break;
      case 2: t = pos.sample(rng, 3 + static_cast<unsigned>(uniform(rng, 4))); break;
      default: t = neg.sample(rng, 3 + static_cast<unsigned>(uniform(rng, 4)));
    }
    if (!t) t = random_tree(pair.alphabet(), rng, 5, false);
    ++v.samples;
    if (!accepts(pair.positive, *t) && !accepts(pair.negative, *t)) {
      ++v.uncovered;
      if (!v.uncovered_example) v.uncovered_example = *t;
    }
  }
  v.soundness = v.uncovered == 0 ? Soundness::FullyVerified : Soundness::DisjointnessVerified;
  return v;
}

AutomatonPair validated(AutomatonPair pair, std::uint64_t seed, std::size_t samples) {
  pair.soundness = validate_pair(pair, seed, samples).soundness;
  return pair;
}

}  // namespace wadge
