#include "wadge/diagnostics.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

#include "wadge/acceptance.hpp"
#include "wadge/cutting_games.hpp"
#include "wadge/scc.hpp"

namespace wadge {

using nlohmann::json;

TypeTree induced_type_tree(const RegularTree& t, const AlgebraTables& alg) {
  const auto& pair = alg.pair();
  const auto pos = accepting_states_per_node(t, pair.positive);
  const auto neg = accepting_states_per_node(t, pair.negative);
  TypeTree out;
  out.labels.resize(t.size());
  for (NodeId n = 0; n < t.size(); ++n) {
    const auto id = alg.find_type(make_type(pair, pos[n], neg[n]));
    if (!id) throw std::runtime_error("subtree at node " + std::to_string(n) + " has a type outside the algebra");
    out.labels[n] = *id;
  }
  return out;
}

Consistency check_local_consistency(const TypeTree& sigma, const RegularTree& t, const AlgebraTables& alg) {
  if (sigma.labels.size() != t.size()) throw std::invalid_argument("type tree and support differ in size");
  // Deepest nodes first, so a single bad label is reported where it sits.
  for (NodeId n = static_cast<NodeId>(t.size()); n-- > 0;) {
    const auto& node = t.node(n);
    if (node.is_port()) throw std::invalid_argument("a type tree support has no ports");
    std::uint32_t expect;
    switch (node.shape()) {
      case Shape::Leaf: expect = alg.leaf(node.label); break;
      case Shape::LeftOnly: expect = alg.unary(node.label, Direction::Left, sigma.labels[*node.left]); break;
      case Shape::RightOnly: expect = alg.unary(node.label, Direction::Right, sigma.labels[*node.right]); break;
      case Shape::Binary:
      default: expect = alg.binary(node.label, sigma.labels[*node.left], sigma.labels[*node.right]); break;
    }
    if (sigma.labels[n] != expect) return {false, n};
  }
  return {};
}

StrategyCheck check_strategy_tree(const StrategyTree& s, const AlgebraTables& alg) {
  StrategyCheck r;
  auto fail = [&](std::string why, std::optional<NodeId> n) {
    r.valid = false;
    r.reason = std::move(why);
    r.node = n;
    return r;
  };
  if (s.layers.empty()) return fail("no layers", std::nullopt);
  for (const auto& layer : s.layers) {
    if (layer.labels.size() != s.support.size()) return fail("layer size differs from the support", std::nullopt);
    for (auto h : layer.labels)
      if (h >= alg.type_count()) return fail("type id out of range", std::nullopt);
  }
  const auto induced = induced_type_tree(s.support, alg);
  for (NodeId n = 0; n < s.support.size(); ++n)
    if (s.layers[0].labels[n] != induced.labels[n]) return fail("first layer is not the induced type tree", n);
  for (std::size_t i = 0; i < s.layers.size(); ++i) {
    const auto c = check_local_consistency(s.layers[i], s.support, alg);
    if (!c.ok) return fail("layer " + std::to_string(i + 1) + " is not locally consistent", c.node);
  }
  std::map<std::vector<std::uint32_t>, bool> solved;
  for (NodeId n = 0; n < s.support.size(); ++n) {
    std::vector<std::uint32_t> seq;
    for (const auto& layer : s.layers) seq.push_back(layer.labels[n]);
    auto it = solved.find(seq);
    if (it == solved.end()) {
      CuttingGameSpec spec;
      for (auto h : seq) spec.sequence.push_back(RoundConstraint::of_type(h));
      it = solved.emplace(seq, solve_finite_game(spec, alg.pair(), &alg).winner == GameWinner::Alternator).first;
    }
    if (!it->second) return fail("Constrainer wins the game on the type sequence", n);
  }
  r.games = solved.size();
  return r;
}

namespace {

unsigned alternation_at(const StrategyTree& s, NodeId n) {
  unsigned k = 0;
  for (std::size_t i = 0; i + 1 < s.layers.size(); ++i) k += s.layers[i].labels[n] != s.layers[i + 1].labels[n];
  return k;
}

}  // namespace

unsigned root_alternation(const StrategyTree& s) { return alternation_at(s, RegularTree::root()); }

unsigned limit_alternation(const StrategyTree& s) {
  const auto& t = s.support;
  const auto n = t.size();
  auto succ = [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
    if (t.node(v).left) out.push_back(*t.node(v).left);
    if (t.node(v).right) out.push_back(*t.node(v).right);
  };
  const auto scc = tarjan_scc(n, succ);
  std::vector<std::size_t> size(scc.count, 0);
  for (auto c : scc.component) ++size[c];
  std::vector<char> repeated(n, 0);
  std::vector<std::uint32_t> todo;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& node = t.node(v);
    const bool self = (node.left && *node.left == v) || (node.right && *node.right == v);
    if (size[scc.component[v]] > 1 || self) {
      repeated[v] = 1;
      todo.push_back(v);
    }
  }
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    std::vector<std::uint32_t> next;
    succ(v, next);
    for (auto w : next)
      if (!repeated[w]) {
        repeated[w] = 1;
        todo.push_back(w);
      }
  }
  unsigned best = 0;
  for (std::uint32_t v = 0; v < n; ++v)
    if (repeated[v]) best = std::max(best, alternation_at(s, v));
  return best;
}

StrategyTree parse_strategy_tree(const std::string& text, const AlphabetPtr& alphabet) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("strategy tree: ") + e.what());
  }
  if (!j.is_object() || !j.contains("support") || !j["support"].is_string() || !j.contains("layers") ||
      !j["layers"].is_array())
    throw std::invalid_argument("strategy tree: expected {\"support\": <tree>, \"layers\": [...]}");
  StrategyTree s{parse_tree(j["support"].get<std::string>(), alphabet), {}};
  for (const auto& layer : j["layers"]) {
    if (!layer.is_array()) throw std::invalid_argument("strategy tree: a layer must be an array of type ids");
    TypeTree tt;
    for (const auto& h : layer) {
      if (!h.is_number_unsigned()) throw std::invalid_argument("strategy tree: type ids are natural numbers");
      tt.labels.push_back(h.get<std::uint32_t>());
    }
    s.layers.push_back(std::move(tt));
  }
  return s;
}

std::string strategy_tree_to_json(const StrategyTree& s) {
  json j;
  j["support"] = to_text(s.support);
  j["layers"] = json::array();
  for (const auto& layer : s.layers) j["layers"].push_back(layer.labels);
  return j.dump(2);
}

}  // namespace wadge
