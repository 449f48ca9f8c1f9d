#include "wadge/algebra.hpp"

#include <bit>
#include <deque>
#include <stdexcept>

#include "wadge/acceptance.hpp"
#include "wadge/errors.hpp"
#include "wadge/scc.hpp"

namespace wadge {

namespace {

std::uint32_t upto(unsigned h) { return h >= 31 ? ~std::uint32_t{0} : (std::uint32_t{1} << (h + 1)) - 1; }
unsigned high_bit(std::uint32_t m) { return 31u - static_cast<unsigned>(std::countl_zero(m)); }

void check_priorities(const ParityTreeAutomaton& a) {
  if (a.max_priority() > 31) throw std::invalid_argument("priorities above 31 are not supported");
}

}  // namespace

std::size_t Transfer::hash() const {
  std::size_t h = n_;
  for (auto m : masks_) h = hash_combine(h, m);
  return h;
}

Transfer Transfer::identity(const ParityTreeAutomaton& a) {
  check_priorities(a);
  Transfer t(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q) t.add(q, a.priority(q), q);
  return t;
}

Transfer compose(const Transfer& first, const Transfer& second) {
  const std::size_t n = first.states();
  Transfer out(n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint32_t m1 = first.mask(q, r);
      if (!m1) continue;
      const std::uint32_t below1 = upto(high_bit(m1));
      for (std::size_t s = 0; s < n; ++s) {
        const std::uint32_t m2 = second.mask(r, s);
        if (!m2) continue;
        out.add_mask(q, (m1 & upto(high_bit(m2))) | (m2 & below1), s);
      }
    }
  return out;
}

Bitset apply(const Transfer& t, const Bitset& target) {
  Bitset out(t.states());
  for (std::size_t q = 0; q < t.states(); ++q) {
    bool hit = false;
    target.for_each([&](std::size_t r) { hit = hit || t.mask(q, r) != 0; });
    if (hit) out.set(q);
  }
  return out;
}

Bitset omega(const Transfer& t) {
  const std::size_t n = t.states();
  std::uint32_t used = 0;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) used |= t.mask(q, r);
  std::vector<char> good(n, 0);
  for (unsigned p = 0; p < 32; p += 2) {
    if (!((used >> p) & 1)) continue;
    const std::uint32_t at_least = ~(upto(p) >> 1);  // bits >= p
    const auto scc = tarjan_scc(n, [&](std::uint32_t q, std::vector<std::uint32_t>& out) {
      for (std::uint32_t r = 0; r < n; ++r)
        if (t.mask(q, r) & at_least) out.push_back(r);
    });
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        if (((t.mask(q, r) >> p) & 1) && scc.component[q] == scc.component[r]) good[q] = 1;
  }
  // Backward closure: states with a path into a good cycle.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (good[q]) continue;
      for (std::size_t r = 0; r < n; ++r)
        if (good[r] && t.mask(q, r)) {
          good[q] = 1;
          changed = true;
          break;
        }
    }
  }
  Bitset out(n);
  for (std::size_t q = 0; q < n; ++q)
    if (good[q]) out.set(q);
  return out;
}

TreeType make_type(const AutomatonPair& pair, Bitset pos, Bitset neg) {
  TreeType t{std::move(pos), std::move(neg), false};
  for (auto q : pair.positive.initial_states()) t.in_l = t.in_l || t.pos.test(q);
  return t;
}

TreeType type_of_tree(const RegularTree& t, const AutomatonPair& pair) {
  return make_type(pair, accepting_states(t, pair.positive), accepting_states(t, pair.negative));
}

namespace {

Bitset leaf_states(const ParityTreeAutomaton& a, Symbol s) {
  Bitset out(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q)
    if (a.moves(q, s).leaf) out.set(q);
  return out;
}

Bitset unary_states(const ParityTreeAutomaton& a, Symbol s, Direction d, const Bitset& child) {
  Bitset out(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q) {
    const auto& list = d == Direction::Left ? a.moves(q, s).left_only : a.moves(q, s).right_only;
    for (auto c : list)
      if (child.test(c)) {
        out.set(q);
        break;
      }
  }
  return out;
}

Bitset binary_states(const ParityTreeAutomaton& a, Symbol s, const Bitset& l, const Bitset& r) {
  Bitset out(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q)
    for (auto [x, y] : a.moves(q, s).binary)
      if (l.test(x) && r.test(y)) {
        out.set(q);
        break;
      }
  return out;
}

Transfer step_transfer(const ParityTreeAutomaton& a, Symbol s, Direction d, const Bitset* side) {
  check_priorities(a);
  Transfer t(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q) {
    const Moves& m = a.moves(q, s);
    auto add = [&](StateId c) { t.add(q, std::min(a.priority(q), a.priority(c)), c); };
    if (!side) {
      for (auto c : d == Direction::Left ? m.left_only : m.right_only) add(c);
      continue;
    }
    for (auto [l, r] : m.binary) {
      if (d == Direction::Left && side->test(r)) add(l);
      if (d == Direction::Right && side->test(l)) add(r);
    }
  }
  return t;
}

}  // namespace

TreeType leaf_type(const AutomatonPair& pair, Symbol a) {
  return make_type(pair, leaf_states(pair.positive, a), leaf_states(pair.negative, a));
}

TreeType unary_type(const AutomatonPair& pair, Symbol a, Direction d, const TreeType& child) {
  return make_type(pair, unary_states(pair.positive, a, d, child.pos), unary_states(pair.negative, a, d, child.neg));
}

TreeType binary_type(const AutomatonPair& pair, Symbol a, const TreeType& left, const TreeType& right) {
  return make_type(pair, binary_states(pair.positive, a, left.pos, right.pos),
                   binary_states(pair.negative, a, left.neg, right.neg));
}

ContextBehavior identity_behavior(const AutomatonPair& pair) {
  return {Transfer::identity(pair.positive), Transfer::identity(pair.negative)};
}

ContextBehavior step_behavior(const AutomatonPair& pair, Symbol a, Direction d, const TreeType* side) {
  return {step_transfer(pair.positive, a, d, side ? &side->pos : nullptr),
          step_transfer(pair.negative, a, d, side ? &side->neg : nullptr)};
}

ContextBehavior compose(const ContextBehavior& outer, const ContextBehavior& inner) {
  return {compose(outer.pos, inner.pos), compose(outer.neg, inner.neg)};
}

TreeType apply(const AutomatonPair& pair, const ContextBehavior& v, const TreeType& h) {
  return make_type(pair, apply(v.pos, h.pos), apply(v.neg, h.neg));
}

TreeType omega(const AutomatonPair& pair, const ContextBehavior& v) {
  return make_type(pair, omega(v.pos), omega(v.neg));
}

ContextBehavior behavior_of_context(const Context& c, const AutomatonPair& pair) {
  if (!same_alphabet(c.tree().alphabet(), pair.alphabet()))
    throw AlphabetMismatch("context and pair use different alphabets");
  ContextBehavior b = identity_behavior(pair);
  const auto& spine = c.spine();
  for (std::size_t i = spine.size() - 1; i-- > 0;) {
    const TreeNode& n = c.tree().node(spine[i]);
    const auto d = c.directions()[i] == 0 ? Direction::Left : Direction::Right;
    const auto side = d == Direction::Left ? n.right : n.left;
    std::optional<TreeType> side_type;
    if (side) side_type = type_of_tree(subtree(c.tree(), *side), pair);
    b = compose(step_behavior(pair, n.label, d, side_type ? &*side_type : nullptr), b);
  }
  return b;
}

// ---------------------------------------------------------------- tables

std::optional<std::uint32_t> AlgebraTables::find_type(const TreeType& t) const {
  auto it = type_index_.find(t);
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> AlgebraTables::find_behavior(const ContextBehavior& b) const {
  auto it = behavior_index_.find(b);
  if (it == behavior_index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t AlgebraTables::add_type(TreeType t, TypeRecipe r) {
  auto it = type_index_.find(t);
  if (it != type_index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(types_.size());
  type_index_.emplace(t, id);
  types_.push_back(std::move(t));
  type_recipes_.push_back(r);
  ++steps_;
  return id;
}

std::uint32_t AlgebraTables::add_behavior(ContextBehavior b, BehaviorRecipe r) {
  auto it = behavior_index_.find(b);
  if (it != behavior_index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(behaviors_.size());
  behavior_index_.emplace(b, id);
  behaviors_.push_back(std::move(b));
  behavior_recipes_.push_back(r);
  omega_.push_back(kNone);
  ++steps_;
  return id;
}

std::uint32_t AlgebraTables::add_generator(Generator g) {
  const auto id = static_cast<std::uint32_t>(generators_.size());
  const TreeType* side = g.side ? &types_[*g.side] : nullptr;
  generator_behaviors_.push_back(step_behavior(*pair_, g.label, g.port, side));
  generators_.push_back(g);
  gen_mult_.emplace_back();
  const auto d = static_cast<std::size_t>(g.port);
  if (g.side) {
    auto& row = side_gen_[g.label][d];
    if (row.size() <= *g.side) row.resize(*g.side + 1, kNone);
    row[*g.side] = id;
  } else {
    plain_gen_[g.label][d] = id;
  }
  return id;
}

std::uint32_t AlgebraTables::unary(Symbol a, Direction d, std::uint32_t h) const {
  return unary_[a][static_cast<std::size_t>(d)].at(h);
}

std::uint32_t AlgebraTables::binary(Symbol a, std::uint32_t left, std::uint32_t right) const {
  return binary_[a].at(left).at(right);
}

std::uint32_t AlgebraTables::generator_id(Symbol a, Direction port, std::optional<std::uint32_t> side) const {
  const auto d = static_cast<std::size_t>(port);
  if (!side) return plain_gen_[a][d];
  return side_gen_[a][d].at(*side);
}

AlgebraTables AlgebraTables::compute(const AutomatonPair& pair, std::size_t budget) {
  AlgebraTables t;
  t.pair_ = std::make_shared<const AutomatonPair>(pair);
  const auto& p = *t.pair_;
  const auto na = static_cast<Symbol>(p.alphabet()->size());
  t.unary_.assign(na, std::vector<std::vector<std::uint32_t>>(2));
  t.binary_.assign(na, {});
  t.plain_gen_.assign(na, std::vector<std::uint32_t>(2, kNone));
  t.side_gen_.assign(na, std::vector<std::vector<std::uint32_t>>(2));

  struct Event {
    bool is_type;
    std::uint32_t id;
  };
  std::deque<Event> queue;
  auto type_added = [&](std::size_t before) {
    for (auto i = before; i < t.types_.size(); ++i) queue.push_back({true, static_cast<std::uint32_t>(i)});
  };
  auto behavior_added = [&](std::size_t before) {
    for (auto i = before; i < t.behaviors_.size(); ++i) queue.push_back({false, static_cast<std::uint32_t>(i)});
  };
  auto new_type = [&](TreeType x, TypeRecipe r) {
    const auto before = t.types_.size();
    const auto id = t.add_type(std::move(x), r);
    type_added(before);
    return id;
  };
  auto new_behavior = [&](ContextBehavior x, BehaviorRecipe r) {
    const auto before = t.behaviors_.size();
    const auto id = t.add_behavior(std::move(x), r);
    behavior_added(before);
    return id;
  };

  new_behavior(identity_behavior(p), BehaviorRecipe{});
  for (Symbol a = 0; a < na; ++a) t.leaf_.push_back(new_type(leaf_type(p, a), {TypeRecipe::Kind::Leaf, a}));
  for (Symbol a = 0; a < na; ++a)
    for (auto d : {Direction::Left, Direction::Right}) t.add_generator(Generator{a, d, std::nullopt});

  std::size_t types_done = 0, behaviors_done = 0;
  while (!queue.empty()) {
    if (t.steps_ > budget) {
      t.complete_ = false;
      break;
    }
    const Event e = queue.front();
    queue.pop_front();
    if (e.is_type) {
      const std::uint32_t i = e.id;
      const TreeType h = t.types_[i];
      for (Symbol a = 0; a < na; ++a) {
        for (auto d : {Direction::Left, Direction::Right}) {
          auto& row = t.unary_[a][static_cast<std::size_t>(d)];
          const auto r = new_type(unary_type(p, a, d, h), {TypeRecipe::Kind::Unary, a, d, i, 0});
          if (row.size() <= i) row.resize(i + 1, kNone);
          row[i] = r;
        }
        auto& bin = t.binary_[a];
        if (bin.size() <= i) bin.resize(i + 1);
        for (std::uint32_t j = 0; j <= i; ++j) {
          const TreeType hj = t.types_[j];
          const auto x = new_type(binary_type(p, a, h, hj), {TypeRecipe::Kind::Binary, a, Direction::Left, i, j});
          const auto y = new_type(binary_type(p, a, hj, h), {TypeRecipe::Kind::Binary, a, Direction::Left, j, i});
          if (bin[i].size() <= j) bin[i].resize(j + 1, kNone);
          if (bin[j].size() <= i) bin[j].resize(i + 1, kNone);
          bin[i][j] = x;
          bin[j][i] = y;
        }
        for (auto d : {Direction::Left, Direction::Right}) {
          const auto g = t.add_generator(Generator{a, d, i});
          for (std::uint32_t v = 0; v < behaviors_done; ++v) {
            const auto r = new_behavior(compose(t.generator_behaviors_[g], t.behaviors_[v]), {false, g, v});
            auto& row = t.gen_mult_[g];
            if (row.size() <= v) row.resize(v + 1, kNone);
            row[v] = r;
            if (r == identity() && !t.identity_loop_) {
              t.identity_loop_ = {g, v};
              t.omega_[r] = new_type(omega(p, t.behaviors_[r]), {TypeRecipe::Kind::Omega, 0, Direction::Left, r, 0});
            }
          }
        }
      }
      types_done = i + 1;
    } else {
      const std::uint32_t k = e.id;
      for (std::uint32_t g = 0; g < t.generators_.size(); ++g) {
        const auto r = new_behavior(compose(t.generator_behaviors_[g], t.behaviors_[k]), {false, g, k});
        auto& row = t.gen_mult_[g];
        if (row.size() <= k) row.resize(k + 1, kNone);
        row[k] = r;
        if (r == identity() && !t.identity_loop_) {
          t.identity_loop_ = {g, k};
          t.omega_[r] = new_type(omega(p, t.behaviors_[r]), {TypeRecipe::Kind::Omega, 0, Direction::Left, r, 0});
        }
      }
      if (k != identity()) t.omega_[k] = new_type(omega(p, t.behaviors_[k]), {TypeRecipe::Kind::Omega, 0,
                                                                             Direction::Left, k, 0});
      behaviors_done = k + 1;
    }
  }
  if (queue.empty()) t.complete_ = true;
  (void)types_done;
  // Pad tables so lookups on unprocessed elements return kNone.
  for (auto& row : t.gen_mult_) row.resize(t.behaviors_.size(), kNone);
  for (Symbol a = 0; a < na; ++a) {
    for (auto& row : t.unary_[a]) row.resize(t.types_.size(), kNone);
    t.binary_[a].resize(t.types_.size());
    for (auto& row : t.binary_[a]) row.resize(t.types_.size(), kNone);
    for (auto& row : t.side_gen_[a]) row.resize(t.types_.size(), kNone);
  }
  return t;
}

std::uint32_t AlgebraTables::compose_ids(std::uint32_t outer, std::uint32_t inner) const {
  auto id = find_behavior(compose(behaviors_.at(outer), behaviors_.at(inner)));
  return id ? *id : kNone;
}

std::uint32_t AlgebraTables::apply_ids(std::uint32_t v, std::uint32_t h) const {
  auto id = find_type(apply(*pair_, behaviors_.at(v), types_.at(h)));
  return id ? *id : kNone;
}

std::uint32_t AlgebraTables::classify(const RegularTree& t) const {
  auto id = find_type(type_of_tree(t, *pair_));
  return id ? *id : kNone;
}

std::vector<std::uint32_t> AlgebraTables::word(std::uint32_t v) const {
  std::vector<std::uint32_t> out;
  while (!behavior_recipes_.at(v).identity) {
    out.push_back(behavior_recipes_[v].generator);
    v = behavior_recipes_[v].inner;
  }
  return out;
}

std::vector<std::uint32_t> AlgebraTables::loop_word(std::uint32_t v) const {
  if (v != identity() || !identity_loop_) return word(v);
  std::vector<std::uint32_t> out{identity_loop_->first};
  for (auto g : word(identity_loop_->second)) out.push_back(g);
  return out;
}

namespace {

// Shared-graph materialization of recipes.
class WitnessBuilder {
public:
  explicit WitnessBuilder(const AlgebraTables& alg) : alg_(alg), memo_(alg.type_count(), kNone) {}

  std::vector<TreeNode> nodes;

  NodeId type_node(std::uint32_t h) {
    if (memo_[h] != kNone) return memo_[h];
    const TypeRecipe& r = alg_.type_recipe(h);
    NodeId id = 0;
    switch (r.kind) {
      case TypeRecipe::Kind::Leaf:
        id = push(r.label);
        break;
      case TypeRecipe::Kind::Unary: {
        const NodeId c = type_node(r.a);
        id = push(r.label);
        (r.dir == Direction::Left ? nodes[id].left : nodes[id].right) = c;
        break;
      }
      case TypeRecipe::Kind::Binary: {
        const NodeId l = type_node(r.a);
        const NodeId rr = type_node(r.b);
        id = push(r.label);
        nodes[id].left = l;
        nodes[id].right = rr;
        break;
      }
      case TypeRecipe::Kind::Omega: {
        const auto spine = chain(alg_.loop_word(r.a));
        id = spine.first;
        redirect(spine.second, id);
        break;
      }
    }
    memo_[h] = id;
    return id;
  }

  /// Builds the spine of a word; returns (root, last spine node) with the
  /// last node's port edge pointing at a fresh port node.
  std::pair<NodeId, NodeId> chain(const std::vector<std::uint32_t>& word) {
    std::vector<NodeId> spine;
    for (auto g : word) {
      const Generator& gen = alg_.generator(g);
      std::optional<NodeId> side;
      if (gen.side) side = type_node(*gen.side);
      const NodeId n = push(gen.label);
      (gen.port == Direction::Left ? nodes[n].right : nodes[n].left) = side;
      spine.push_back(n);
    }
    const NodeId port = push(kPortSymbol);
    for (std::size_t i = 0; i < spine.size(); ++i) {
      const NodeId next = i + 1 < spine.size() ? spine[i + 1] : port;
      const Generator& gen = alg_.generator(word[i]);
      (gen.port == Direction::Left ? nodes[spine[i]].left : nodes[spine[i]].right) = next;
    }
    if (spine.empty()) return {port, port};
    return {spine.front(), spine.back()};
  }

  void redirect(NodeId last, NodeId target) {
    TreeNode& n = nodes[last];
    if (n.left && nodes[*n.left].is_port())
      n.left = target;
    else
      n.right = target;
  }

private:
  NodeId push(Symbol label) {
    nodes.push_back(TreeNode{label, std::nullopt, std::nullopt});
    return static_cast<NodeId>(nodes.size() - 1);
  }

  const AlgebraTables& alg_;
  std::vector<NodeId> memo_;
};

}  // namespace

RegularTree AlgebraTables::tree_witness(std::uint32_t h) const {
  WitnessBuilder b(*this);
  const NodeId root = b.type_node(h);
  return RegularTree(pair_->alphabet(), std::move(b.nodes), root);
}

Context AlgebraTables::context_witness(std::uint32_t v) const {
  WitnessBuilder b(*this);
  const NodeId root = b.chain(word(v)).first;
  return Context(RegularTree(pair_->alphabet(), std::move(b.nodes), root));
}

std::string type_label(const AlgebraTables&, std::uint32_t h) { return "h" + std::to_string(h); }

}  // namespace wadge
