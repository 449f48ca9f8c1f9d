#pragma once

// Tree types and context behaviors of an automaton pair, and the saturated
// algebra they form.
//
// A tree type is the pair of accepting-state sets of a tree in both
// automata. A context behavior records, for every automaton, the triples
// (qIn, p, qOut) such that some run from qIn reaches the port in qOut with
// least priority p on the root-to-port path (both endpoints included) while
// accepting every other branch.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wadge/bitset.hpp"
#include "wadge/pair.hpp"
#include "wadge/tree.hpp"

namespace wadge {

/// Transfer relation of one automaton. For each (qIn, qOut) a bitmask of the
/// realizable path minima (priorities are limited to 0..31).
class Transfer {
public:
  Transfer() = default;
  explicit Transfer(std::size_t states) : n_(states), masks_(states * states, 0) {}

  static Transfer identity(const ParityTreeAutomaton& a);

  std::size_t states() const { return n_; }
  std::uint32_t mask(std::size_t q, std::size_t r) const { return masks_[q * n_ + r]; }
  void add(std::size_t q, unsigned p, std::size_t r) { masks_[q * n_ + r] |= (std::uint32_t{1} << p); }
  void add_mask(std::size_t q, std::uint32_t m, std::size_t r) { masks_[q * n_ + r] |= m; }

  friend bool operator==(const Transfer&, const Transfer&) = default;
  friend auto operator<=>(const Transfer&, const Transfer&) = default;
  std::size_t hash() const;

private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> masks_;
};

/// first ; second: run through `first` from the root, then `second`.
Transfer compose(const Transfer& first, const Transfer& second);

/// States q with a transfer path to `target`.
Bitset apply(const Transfer& t, const Bitset& target);

/// Accepting states of v^infinity: states reaching a cycle whose least
/// recorded minimum is even.
Bitset omega(const Transfer& t);

struct TreeType {
  Bitset pos;
  Bitset neg;
  bool in_l = false;

  friend bool operator==(const TreeType& a, const TreeType& b) { return a.pos == b.pos && a.neg == b.neg; }
  friend auto operator<=>(const TreeType& a, const TreeType& b) {
    if (auto c = a.pos <=> b.pos; c != 0) return c;
    return a.neg <=> b.neg;
  }
};

struct ContextBehavior {
  Transfer pos;
  Transfer neg;

  friend bool operator==(const ContextBehavior&, const ContextBehavior&) = default;
  friend auto operator<=>(const ContextBehavior&, const ContextBehavior&) = default;
};

struct TreeTypeHash {
  std::size_t operator()(const TreeType& t) const { return hash_combine(t.pos.hash(), t.neg.hash()); }
};
struct BehaviorHash {
  std::size_t operator()(const ContextBehavior& b) const { return hash_combine(b.pos.hash(), b.neg.hash()); }
};

/// Single-node contexts and their tree counterparts.
enum class Direction : std::uint8_t { Left = 0, Right = 1 };

TreeType make_type(const AutomatonPair& pair, Bitset pos, Bitset neg);
TreeType type_of_tree(const RegularTree& t, const AutomatonPair& pair);
TreeType leaf_type(const AutomatonPair& pair, Symbol a);
TreeType unary_type(const AutomatonPair& pair, Symbol a, Direction d, const TreeType& child);
TreeType binary_type(const AutomatonPair& pair, Symbol a, const TreeType& left, const TreeType& right);

ContextBehavior identity_behavior(const AutomatonPair& pair);
/// a(*) / a(-,*) when side is absent, a(*,side) / a(side,*) otherwise; the
/// port is in direction d.
ContextBehavior step_behavior(const AutomatonPair& pair, Symbol a, Direction d, const TreeType* side);
ContextBehavior compose(const ContextBehavior& outer, const ContextBehavior& inner);
TreeType apply(const AutomatonPair& pair, const ContextBehavior& v, const TreeType& h);
TreeType omega(const AutomatonPair& pair, const ContextBehavior& v);
ContextBehavior behavior_of_context(const Context& c, const AutomatonPair& pair);

/// A single-node context generator: label, port direction, optional side type.
struct Generator {
  Symbol label = 0;
  Direction port = Direction::Left;
  std::optional<std::uint32_t> side;  // tree type id
};

struct TypeRecipe {
  enum class Kind : std::uint8_t { Leaf, Unary, Binary, Omega } kind = Kind::Leaf;
  Symbol label = 0;
  Direction dir = Direction::Left;  // Unary only
  std::uint32_t a = 0, b = 0;       // child type ids, or behavior id for Omega
};

struct BehaviorRecipe {
  bool identity = true;
  std::uint32_t generator = 0;
  std::uint32_t inner = 0;  // behavior id; this = generator ; inner
};

inline constexpr std::uint32_t kNone = 0xffffffffu;

class AlgebraTables {
public:
  /// Saturates from below; stops after `budget` new elements and then
  /// reports itself incomplete.
  static AlgebraTables compute(const AutomatonPair& pair, std::size_t budget = 10000);

  const AutomatonPair& pair() const { return *pair_; }
  bool complete() const { return complete_; }
  std::size_t steps() const { return steps_; }

  std::size_t type_count() const { return types_.size(); }
  std::size_t behavior_count() const { return behaviors_.size(); }
  std::size_t generator_count() const { return generators_.size(); }
  const TreeType& type(std::uint32_t h) const { return types_.at(h); }
  const ContextBehavior& behavior(std::uint32_t v) const { return behaviors_.at(v); }
  const Generator& generator(std::uint32_t g) const { return generators_.at(g); }
  const TypeRecipe& type_recipe(std::uint32_t h) const { return type_recipes_.at(h); }
  const BehaviorRecipe& behavior_recipe(std::uint32_t v) const { return behavior_recipes_.at(v); }
  static constexpr std::uint32_t identity() { return 0; }

  std::optional<std::uint32_t> find_type(const TreeType& t) const;
  std::optional<std::uint32_t> find_behavior(const ContextBehavior& b) const;

  std::uint32_t leaf(Symbol a) const { return leaf_[a]; }
  std::uint32_t unary(Symbol a, Direction d, std::uint32_t h) const;
  std::uint32_t binary(Symbol a, std::uint32_t left, std::uint32_t right) const;
  /// Generator id of a(*) / a(-,*) (side absent) or a(*,h) / a(h,*).
  std::uint32_t generator_id(Symbol a, Direction port, std::optional<std::uint32_t> side) const;
  /// generator ; v
  std::uint32_t prepend(std::uint32_t g, std::uint32_t v) const { return gen_mult_[g][v]; }
  /// kNone for the identity unless some nonempty context has the identity
  /// behavior.
  std::uint32_t omega_of(std::uint32_t v) const { return omega_[v]; }

  /// Table-free operations; kNone when the result is not a stored element.
  std::uint32_t compose_ids(std::uint32_t outer, std::uint32_t inner) const;
  std::uint32_t apply_ids(std::uint32_t v, std::uint32_t h) const;

  /// Explicit witnesses rebuilt from the recipes.
  RegularTree tree_witness(std::uint32_t h) const;
  Context context_witness(std::uint32_t v) const;
  /// Generators of v from the root down.
  std::vector<std::uint32_t> word(std::uint32_t v) const;
  /// A nonempty word for v when one is known; word(v) otherwise.
  std::vector<std::uint32_t> loop_word(std::uint32_t v) const;

  /// Id of the type of t, computing it by games; kNone if not stored.
  std::uint32_t classify(const RegularTree& t) const;

  std::string to_json() const;
  /// Reads tables written by to_json for the same pair; throws on mismatch.
  static AlgebraTables from_json(const std::string& text, const AutomatonPair& pair);

private:
  std::uint32_t add_type(TreeType t, TypeRecipe r);
  std::uint32_t add_behavior(ContextBehavior b, BehaviorRecipe r);
  std::uint32_t add_generator(Generator g);
  void rebuild_indexes();

  std::shared_ptr<const AutomatonPair> pair_;
  bool complete_ = false;
  std::size_t steps_ = 0;
  std::vector<TreeType> types_;
  std::vector<TypeRecipe> type_recipes_;
  std::vector<ContextBehavior> behaviors_;
  std::vector<BehaviorRecipe> behavior_recipes_;
  std::vector<Generator> generators_;
  std::vector<ContextBehavior> generator_behaviors_;
  std::unordered_map<TreeType, std::uint32_t, TreeTypeHash> type_index_;
  std::unordered_map<ContextBehavior, std::uint32_t, BehaviorHash> behavior_index_;

  std::vector<std::uint32_t> leaf_;
  // unary_[a][d][h], binary_[a][l][r]
  std::vector<std::vector<std::vector<std::uint32_t>>> unary_;
  std::vector<std::vector<std::vector<std::uint32_t>>> binary_;
  // plain_gen_[a][d]; side_gen_[a][d][h]
  std::vector<std::vector<std::uint32_t>> plain_gen_;
  std::vector<std::vector<std::vector<std::uint32_t>>> side_gen_;
  std::vector<std::vector<std::uint32_t>> gen_mult_;
  std::vector<std::uint32_t> omega_;
  // (generator, inner) with generator ; inner = identity, if any.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> identity_loop_;
};

std::string type_label(const AlgebraTables& alg, std::uint32_t h);

/// Digest of both automata's text form.
std::string pair_digest(const AutomatonPair& pair);

}  // namespace wadge
