#include "wadge/cutting_games.hpp"

#include <json.hpp>

#include <stdexcept>

#include "wadge/acceptance.hpp"
#include "wadge/errors.hpp"

namespace wadge {

using nlohmann::json;

namespace {

StateId add_universal(ParityTreeAutomaton& a, const std::string& name) {
  const StateId top = a.add_state(name, 0);
  for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
    a.add_leaf(top, s);
    a.add_left(top, s, top);
    a.add_right(top, s, top);
    a.add_binary(top, s, top, top);
  }
  return top;
}

ParityTreeAutomaton intersect(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b) {
  return reduce(product(a, b));
}

bool is_empty(const ParityTreeAutomaton& a) {
  const Bitset live = productive_states(a);
  for (auto q : a.initial_states())
    if (live.test(q)) return false;
  return true;
}

ParityTreeAutomaton constraint_language(const RoundConstraint& c, const AutomatonPair& pair,
                                        const AlgebraTables* alg) {
  switch (c.kind) {
    case RoundConstraint::Kind::InL:
      return reduce(pair.positive);
    case RoundConstraint::Kind::NotInL:
      return reduce(pair.negative);
    case RoundConstraint::Kind::Type:
      if (!alg) throw std::invalid_argument("type constraint needs an algebra");
      if (c.type >= alg->type_count()) throw std::invalid_argument("type id out of range");
      return type_language(pair, alg->type(c.type));
  }
  return empty_automaton(pair.alphabet());
}

}  // namespace

ParityTreeAutomaton closure_automaton(const ParityTreeAutomaton& a) {
  const Bitset live = productive_states(a);
  ParityTreeAutomaton out(a.alphabet());
  for (StateId q = 0; q < a.state_count(); ++q) out.add_state(a.name(q), 0, a.is_initial(q) && live.test(q));
  for (StateId q = 0; q < a.state_count(); ++q) {
    if (!live.test(q)) continue;
    for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
      const Moves& m = a.moves(q, s);
      if (m.leaf) out.add_leaf(q, s);
      for (auto c : m.left_only)
        if (live.test(c)) out.add_left(q, s, c);
      for (auto c : m.right_only)
        if (live.test(c)) out.add_right(q, s, c);
      for (auto [l, r] : m.binary)
        if (live.test(l) && live.test(r)) out.add_binary(q, s, l, r);
    }
  }
  return reduce(out);
}

ParityTreeAutomaton extensions_automaton(const Prefix& p) {
  const RegularTree& t = p.tree();
  ParityTreeAutomaton out(t.alphabet());
  const StateId top = add_universal(out, "any");
  if (t.node(RegularTree::root()).is_port()) {
    out.set_initial(top);
    return out;
  }
  std::vector<StateId> state(t.size(), top);
  for (NodeId n = 0; n < t.size(); ++n)
    if (!t.node(n).is_port()) state[n] = out.add_state("p" + std::to_string(n), 0, n == RegularTree::root());
  for (NodeId n = 0; n < t.size(); ++n) {
    const TreeNode& node = t.node(n);
    if (node.is_port()) continue;
    out.add_shaped(state[n], node.label, node.shape(), node.left ? state[*node.left] : top,
                   node.right ? state[*node.right] : top);
  }
  return out;
}

ParityTreeAutomaton type_language(const AutomatonPair& pair, const TreeType& type) {
  std::optional<ParityTreeAutomaton> acc;
  auto meet = [&](const ParityTreeAutomaton& a, const Bitset& states) {
    states.for_each([&](std::size_t q) {
      auto one = reduce(with_initial(a, {static_cast<StateId>(q)}));
      acc = acc ? intersect(*acc, one) : std::move(one);
    });
  };
  meet(pair.positive, type.pos);
  meet(pair.negative, type.neg);
  if (!acc) return universal_automaton(pair.alphabet());
  return std::move(*acc);
}

CuttingGameSpec CuttingGameSpec::alternating(unsigned k, bool start_in_l) {
  CuttingGameSpec s;
  for (unsigned i = 0; i < k; ++i)
    s.sequence.push_back((i % 2 == 0) == start_in_l ? RoundConstraint::in_l() : RoundConstraint::not_in_l());
  return s;
}

std::string to_string(GameWinner w) { return w == GameWinner::Alternator ? "Alternator" : "Constrainer"; }

std::vector<ParityTreeAutomaton> game_chain(const std::vector<ParityTreeAutomaton>& languages) {
  std::vector<ParityTreeAutomaton> chain;
  chain.reserve(languages.size());
  for (std::size_t i = languages.size(); i-- > 0;) {
    if (chain.empty())
      chain.push_back(reduce(languages[i]));
    else
      chain.push_back(intersect(languages[i], closure_automaton(chain.back())));
  }
  return {std::make_move_iterator(chain.rbegin()), std::make_move_iterator(chain.rend())};
}

CuttingGameVerdict solve_finite_game(const CuttingGameSpec& spec, const AutomatonPair& pair, const AlgebraTables* alg) {
  if (spec.sequence.empty()) throw std::invalid_argument("a cutting game needs at least one round");
  std::vector<ParityTreeAutomaton> langs;
  for (const auto& c : spec.sequence) langs.push_back(constraint_language(c, pair, alg));
  const auto start = spec.start ? std::optional(extensions_automaton(*spec.start)) : std::nullopt;

  auto first_moves = [&](std::size_t rounds) {
    std::vector<ParityTreeAutomaton> sub(langs.begin(), langs.begin() + static_cast<std::ptrdiff_t>(rounds));
    auto x1 = std::move(game_chain(sub).front());
    return start ? intersect(x1, *start) : x1;
  };

  CuttingGameVerdict v;
  auto x1 = first_moves(langs.size());
  auto e = check_emptiness(x1);
  if (!e.empty) {
    v.winner = GameWinner::Alternator;
    v.witness = std::move(e.witness);
    v.chain_states = x1.state_count();
    return v;
  }
  v.winner = GameWinner::Constrainer;
  v.fail_round = static_cast<unsigned>(langs.size());
  for (std::size_t m = 1; m < langs.size(); ++m)
    if (is_empty(first_moves(m))) {
      v.fail_round = static_cast<unsigned>(m);
      break;
    }
  return v;
}

AlternatingChains::AlternatingChains(const AutomatonPair& pair) : pair_(&pair) {}

void AlternatingChains::extend(unsigned j) {
  if (j == 0) throw std::invalid_argument("chains are indexed from 1");
  while (a_.size() < j) {
    if (a_.empty()) {
      a_.push_back(reduce(pair_->positive));
      b_.push_back(reduce(pair_->negative));
    } else {
      const auto none = empty_automaton(pair_->alphabet());
      auto na = b_empty_.back() ? none : intersect(pair_->positive, closure_automaton(b_.back()));
      auto nb = a_empty_.back() ? none : intersect(pair_->negative, closure_automaton(a_.back()));
      a_.push_back(std::move(na));
      b_.push_back(std::move(nb));
    }
    a_empty_.push_back(is_empty(a_.back()));
    b_empty_.push_back(is_empty(b_.back()));
  }
}

const ParityTreeAutomaton& AlternatingChains::starting_in_l(unsigned j) {
  extend(j);
  return a_[j - 1];
}
const ParityTreeAutomaton& AlternatingChains::starting_out_of_l(unsigned j) {
  extend(j);
  return b_[j - 1];
}
bool AlternatingChains::empty_in_l(unsigned j) {
  extend(j);
  return a_empty_[j - 1];
}
bool AlternatingChains::empty_out_of_l(unsigned j) {
  extend(j);
  return b_empty_[j - 1];
}

AlternationIndex alternation_index(AlternatingChains& chains, unsigned cap) {
  if (cap == 0) throw std::invalid_argument("cap must be at least 1");
  AlternationIndex r;
  r.cap = cap;
  for (unsigned k = 1; k <= cap; ++k)
    if (chains.empty_in_l(k)) {
      r.fails_at = k;
      // A longer game cannot be easier for Alternator.
      if (k < cap && !chains.empty_in_l(k + 1)) throw std::logic_error("cutting game chain is not antitone");
      break;
    }
  return r;
}

AlternationIndex alternation_index(const AutomatonPair& pair, unsigned cap) {
  AlternatingChains chains(pair);
  return alternation_index(chains, cap);
}

DelayedProbe delayed_game_probe(AlternatingChains& chains, unsigned cap) {
  if (cap == 0) throw std::invalid_argument("cap must be at least 1");
  DelayedProbe r;
  r.cap = cap;
  const ParityTreeAutomaton l = chains.starting_in_l(1);
  if (chains.empty_in_l(1)) {
    r.constrainer_wins_at = 0;
    return r;
  }
  // The move sets shrink with k, so the stage-k language already is the
  // intersection over all smaller stages.
  for (unsigned k = 1; k <= cap; ++k) {
    auto stage = chains.empty_out_of_l(k) ? empty_automaton(l.alphabet())
                                          : intersect(l, closure_automaton(chains.starting_out_of_l(k)));
    auto e = check_emptiness(stage);
    if (e.empty) {
      r.constrainer_wins_at = k;
      r.witness.reset();
      return r;
    }
    r.witness = std::move(e.witness);
  }
  return r;
}

DelayedProbe delayed_game_probe(const AutomatonPair& pair, unsigned cap) {
  AlternatingChains chains(pair);
  return delayed_game_probe(chains, cap);
}

CuttingGameSpec parse_game_spec(const std::string& text, const AlphabetPtr& alphabet) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("game spec: ") + e.what());
  }
  CuttingGameSpec s;
  if (!j.is_object() || !j.contains("sequence") || !j["sequence"].is_array())
    throw std::invalid_argument("game spec: expected an object with a \"sequence\" array");
  if (j.contains("start") && !j["start"].is_null()) {
    if (!j["start"].is_string()) throw std::invalid_argument("game spec: \"start\" must be a tree text or null");
    s.start = Prefix(parse_tree(j["start"].get<std::string>(), alphabet));
  }
  for (const auto& c : j["sequence"]) {
    if (c == "L")
      s.sequence.push_back(RoundConstraint::in_l());
    else if (c == "coL")
      s.sequence.push_back(RoundConstraint::not_in_l());
    else if (c.is_object() && c.contains("type") && c["type"].is_number_unsigned())
      s.sequence.push_back(RoundConstraint::of_type(c["type"].get<std::uint32_t>()));
    else
      throw std::invalid_argument("game spec: bad round constraint " + c.dump());
  }
  return s;
}

std::string game_spec_to_json(const CuttingGameSpec& spec) {
  json j;
  j["start"] = spec.start ? json(to_text(spec.start->tree())) : json(nullptr);
  j["sequence"] = json::array();
  for (const auto& c : spec.sequence) {
    switch (c.kind) {
      case RoundConstraint::Kind::InL: j["sequence"].push_back("L"); break;
      case RoundConstraint::Kind::NotInL: j["sequence"].push_back("coL"); break;
      case RoundConstraint::Kind::Type: j["sequence"].push_back({{"type", c.type}}); break;
    }
  }
  return j.dump(2);
}

std::string verdict_to_json(const CuttingGameVerdict& v) {
  json j;
  j["winner"] = to_string(v.winner);
  if (v.winner == GameWinner::Alternator) {
    j["witness"] = v.witness ? json(to_text(*v.witness)) : json(nullptr);
    j["chainStates"] = v.chain_states;
  } else {
    j["failRound"] = v.fail_round ? json(*v.fail_round) : json(nullptr);
  }
  return j.dump(2);
}

}  // namespace wadge
