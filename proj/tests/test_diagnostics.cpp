#include "doctest.h"
#include "fixtures.hpp"
#include "wadge/acceptance.hpp"
#include "wadge/cutting_games.hpp"
#include "wadge/diagnostics.hpp"
#include "wadge/sampling.hpp"

using namespace wadge;
using namespace fixture;

namespace {

const char* kFullA = "node 0 label a left 0 right 0\nroot 0\n";

struct Fixture {
  AutomatonPair pair{parse_automaton(kAllA), parse_automaton(kSomeB)};
  AlgebraTables alg = AlgebraTables::compute(pair);
  AlphabetPtr ab = pair.alphabet();
};

// Iterates the local clauses from the given labels; nullopt without a fixpoint.
std::optional<TypeTree> forward_fixpoint(const RegularTree& t, const AlgebraTables& alg, TypeTree sigma) {
  for (int round = 0; round < 64; ++round) {
    TypeTree next = sigma;
    for (NodeId n = 0; n < t.size(); ++n) {
      const auto& node = t.node(n);
      switch (node.shape()) {
        case Shape::Leaf: next.labels[n] = alg.leaf(node.label); break;
        case Shape::LeftOnly: next.labels[n] = alg.unary(node.label, Direction::Left, sigma.labels[*node.left]); break;
        case Shape::RightOnly:
          next.labels[n] = alg.unary(node.label, Direction::Right, sigma.labels[*node.right]);
          break;
        case Shape::Binary:
          next.labels[n] = alg.binary(node.label, sigma.labels[*node.left], sigma.labels[*node.right]);
          break;
      }
    }
    if (next.labels == sigma.labels) return sigma;
    sigma = std::move(next);
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("induced type trees") {
  Fixture f;
  const auto full = parse_tree(kFullA, f.ab);
  const auto s = induced_type_tree(full, f.alg);
  CHECK(s.labels.size() == 1);
  CHECK(f.alg.type(s.labels[0]).in_l);

  const auto three = parse_tree("node 0 label a left 1 right 2\nnode 1 label b left - right -\n"
                                "node 2 label a left - right -\nroot 0\n", f.ab);
  const auto t3 = induced_type_tree(three, f.alg);
  for (NodeId n = 0; n < three.size(); ++n) CHECK(t3.labels[n] == f.alg.classify(subtree(three, n)));

  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto t = random_tree(f.ab, rng, 5, i % 2 == 0);
    const auto sigma = induced_type_tree(t, f.alg);
    CHECK(f.alg.type(sigma.labels[0]).in_l == accepts(f.pair.positive, t));
    CHECK(check_local_consistency(sigma, t, f.alg).ok);
  }
}

TEST_CASE("corrupted labels are found where they are") {
  Fixture f;
  Rng rng(32);
  int tested = 0;
  for (int i = 0; i < 60; ++i) {
    const auto t = random_tree(f.ab, rng, 5, true);
    auto sigma = induced_type_tree(t, f.alg);
    const auto n = static_cast<NodeId>(uniform(rng, t.size()));
    sigma.labels[n] = (sigma.labels[n] + 1) % static_cast<std::uint32_t>(f.alg.type_count());
    const auto c = check_local_consistency(sigma, t, f.alg);
    CHECK_FALSE(c.ok);
    CHECK(c.node == n);
    ++tested;
  }
  CHECK(tested == 60);
}

TEST_CASE("forward fixpoints are consistent") {
  Fixture f;
  Rng rng(33);
  int found = 0;
  for (int i = 0; i < 80; ++i) {
    const auto t = random_tree(f.ab, rng, 4);
    TypeTree start;
    for (NodeId n = 0; n < t.size(); ++n)
      start.labels.push_back(static_cast<std::uint32_t>(uniform(rng, f.alg.type_count())));
    if (auto sigma = forward_fixpoint(t, f.alg, start)) {
      CHECK(check_local_consistency(*sigma, t, f.alg).ok);
      ++found;
    }
  }
  CHECK(found > 10);
}

TEST_CASE("one layer strategy trees") {
  Fixture f;
  Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_tree(f.ab, rng, 4);
    StrategyTree s{t, {induced_type_tree(t, f.alg)}};
    const auto c = check_strategy_tree(s, f.alg);
    CHECK(c.valid);
    CHECK(root_alternation(s) == 0);
    CHECK(limit_alternation(s) == 0);
    s.layers.push_back(s.layers[0]);
    CHECK(check_strategy_tree(s, f.alg).valid);
    CHECK(root_alternation(s) == 0);
  }
}

TEST_CASE("an alternating strategy tree on the all-a tree") {
  Fixture f;
  const auto full = parse_tree(kFullA, f.ab);
  const auto sigma = induced_type_tree(full, f.alg);
  const Symbol a = f.ab->at("a");
  std::optional<std::uint32_t> other;
  for (std::uint32_t h = 0; h < f.alg.type_count(); ++h)
    if (!f.alg.type(h).in_l && f.alg.binary(a, h, h) == h) other = h;
  REQUIRE(other);
  StrategyTree s{full, {sigma, TypeTree{{*other}}}};
  const auto c = check_strategy_tree(s, f.alg);
  CHECK(c.valid);
  CHECK(root_alternation(s) == 1);
  CHECK(limit_alternation(s) == 1);
  // Back into the closed set is impossible.
  s.layers.push_back(sigma);
  const auto bad = check_strategy_tree(s, f.alg);
  CHECK_FALSE(bad.valid);
  CHECK(bad.reason.find("Constrainer") != std::string::npos);
  CHECK(root_alternation(s) <= s.layers.size() - 1);
}

TEST_CASE("invalid strategy trees name their clause") {
  Fixture f;
  const auto full = parse_tree(kFullA, f.ab);
  const auto sigma = induced_type_tree(full, f.alg);
  StrategyTree s{full, {}};
  CHECK_FALSE(check_strategy_tree(s, f.alg).valid);
  s.layers = {TypeTree{{(sigma.labels[0] + 1) % static_cast<std::uint32_t>(f.alg.type_count())}}};
  CHECK(check_strategy_tree(s, f.alg).reason.find("induced") != std::string::npos);
  s.layers = {sigma, TypeTree{{sigma.labels[0], 0}}};
  CHECK(check_strategy_tree(s, f.alg).reason.find("size") != std::string::npos);
}

TEST_CASE("constant layers let Alternator repeat one tree") {
  Fixture f;
  Rng rng(35);
  for (int i = 0; i < 15; ++i) {
    const auto t = random_tree(f.ab, rng, 4);
    const auto h = induced_type_tree(t, f.alg).labels[0];
    std::vector<ParityTreeAutomaton> langs;
    const auto first = f.alg.type(h).in_l ? f.pair.negative : f.pair.positive;
    langs.push_back(first);
    for (int k = 0; k < 3; ++k) langs.push_back(type_language(f.pair, f.alg.type(h)));
    const auto chain = game_chain(langs);
    const auto last = check_emptiness(chain.back());
    REQUIRE_FALSE(last.empty);
    for (std::size_t j = 1; j < chain.size(); ++j) CHECK(accepts(chain[j], *last.witness));
  }
}

TEST_CASE("strategy tree json round trip") {
  Fixture f;
  const auto full = parse_tree(kFullA, f.ab);
  StrategyTree s{full, {induced_type_tree(full, f.alg), TypeTree{{0}}}};
  const auto back = parse_strategy_tree(strategy_tree_to_json(s), f.ab);
  CHECK(back.support == s.support);
  REQUIRE(back.layers.size() == 2);
  CHECK(back.layers[1].labels == s.layers[1].labels);
  CHECK_THROWS(parse_strategy_tree("{\"support\": 3}", f.ab));
}
