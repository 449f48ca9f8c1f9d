#include "doctest.h"
#include "golden.hpp"
#include "wadge/acceptance.hpp"
#include "wadge/canonical.hpp"
#include "wadge/sampling.hpp"

using namespace wadge;

TEST_CASE("term syntax") {
  const auto ab = corpus_alphabet();
  const auto full = golden::parse_term("F=a($F,$F)", ab);
  CHECK(full.size() == 1);
  CHECK(full.node(0).left == NodeId{0});
  const auto t = golden::parse_term("a(b,-)", ab);
  CHECK(t.size() == 2);
  CHECK_FALSE(t.node(0).right);
  // Inner bindings shadow outer ones.
  const auto s = golden::parse_term("X=a(X=b($X,-),$X)", ab);
  CHECK(s.node(0).right == NodeId{0});
  CHECK_THROWS(golden::parse_term("a(b)", ab));
  CHECK_THROWS(golden::parse_term("$Y", ab));
  CHECK_THROWS(golden::parse_term("c", ab));
}

TEST_CASE("constructor golden trees") {
  for (const auto& f : golden::families()) {
    CAPTURE(f.name);
    const auto o = golden::run(f);
    CHECK(o.trees >= 30);
    CHECK(o.accepted >= 3);
    CHECK(o.rejected >= 3);
    for (const auto& bad : o.failures) FAIL_CHECK(bad);
  }
}

TEST_CASE("sampled members agree with the formulas") {
  Rng rng(41);
  for (const auto& f : golden::families()) {
    CAPTURE(f.name);
    const MemberSampler in(f.pair.positive), out(f.pair.negative);
    for (int i = 0; i < 20; ++i) {
      const auto t = in.sample(rng, 5);
      REQUIRE(t);
      CHECK(f.oracle(*t, RegularTree::root()));
      const auto u = out.sample(rng, 5);
      REQUIRE(u);
      CHECK_FALSE(f.oracle(*u, RegularTree::root()));
    }
    for (int i = 0; i < 40; ++i) {
      const auto t = random_tree(f.pair.alphabet(), rng, 6, i % 2 == 0);
      CHECK(accepts(f.pair.positive, t) == f.oracle(t, RegularTree::root()));
    }
  }
}

TEST_CASE("bullet recursion is structural") {
  const auto closed = base_closed();
  const auto one = bullet(closed, 1);
  CHECK(one.positive == closed.positive);
  CHECK(one.negative == closed.negative);
  const auto two = bullet(closed, 2), s = sum(bullet(closed, 1), closed);
  CHECK(two.positive == s.positive);
  CHECK(two.negative == s.negative);
  CHECK_THROWS_AS(bullet(closed, 9), std::invalid_argument);
  CHECK_THROWS_AS(sup_minus({}), std::invalid_argument);
}

TEST_CASE("swapping an operand swaps the disjoint union tags") {
  const auto closed = base_closed();
  const auto pm = plus_minus(closed), dual = plus_minus(closed.swapped());
  const auto ab = corpus_alphabet();
  const Symbol tl = ab->at("@l"), tr = ab->at("@r");
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    auto t = random_tree(ab, rng, 5, i % 3 == 0);
    auto nodes = t.nodes();
    if (nodes[0].label != tl && nodes[0].label != tr) nodes[0].label = i % 2 ? tl : tr;
    const RegularTree tagged(ab, nodes, 0);
    // Only the root tag is swapped; other nodes keep their labels.
    std::vector<TreeNode> flipped = tagged.nodes();
    const NodeId root = static_cast<NodeId>(flipped.size());
    flipped.push_back(flipped[0]);
    flipped.back().label = flipped[0].label == tl ? tr : tl;
    const RegularTree swapped(ab, flipped, root);
    CHECK(accepts(dual.positive, tagged) == accepts(pm.positive, swapped));
    CHECK(accepts(dual.negative, tagged) == accepts(pm.negative, swapped));
  }
}

TEST_CASE("every corpus pair is disjoint and the negative control is not") {
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    const auto v = validate_pair(corpus_pair(e), 0, 60);
    if (e.in_delta02) {
      CHECK(v.disjoint);
      CHECK(v.uncovered == 0);
    } else {
      REQUIRE_FALSE(v.disjoint);
      REQUIRE(v.overlap);
      CHECK(accepts(corpus_pair(e).positive, *v.overlap));
      CHECK(accepts(corpus_pair(e).negative, *v.overlap));
    }
  }
}
