#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "wadge/acceptance.hpp"
#include "wadge/canonical.hpp"
#include "wadge/sampling.hpp"
#include "wadge/strategy_graph.hpp"
#include "wadge/syntactic.hpp"

using namespace wadge;
using namespace fixture;

namespace {

struct Setup {
  AutomatonPair pair;
  AlgebraTables alg;
  SyntacticAlgebra syn;
  StrategyGraph graph;

  explicit Setup(AutomatonPair p)
      : pair(std::move(p)), alg(AlgebraTables::compute(pair, 60000)), syn(checked(alg)), graph(StrategyGraph::build(syn)) {}

  static const AlgebraTables& checked(const AlgebraTables& a) {
    REQUIRE(a.complete());
    return a;
  }
};

std::vector<std::string> small_entries() {
  return {"closed-all-a", "open-some-non-a", "plus-minus", "arrow", "sup-minus", "omega-example"};
}

}  // namespace

TEST_CASE("quotient tables are consistent with the raw algebra") {
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    const auto& alg = s.alg;
    const auto& syn = s.syn;
    for (std::uint32_t h = 0; h < alg.type_count(); ++h)
      REQUIRE(syn.in_l(syn.type_class(h)) == alg.type(h).in_l);
    for (std::uint32_t v = 0; v < alg.behavior_count(); ++v)
      for (std::uint32_t h = 0; h < alg.type_count(); ++h) {
        const auto r = alg.apply_ids(v, h);
        if (r != kNone) REQUIRE(syn.apply(syn.behavior_class(v), syn.type_class(h)) == syn.type_class(r));
      }
    for (std::uint32_t g = 0; g < alg.generator_count(); ++g)
      for (std::uint32_t v = 0; v < alg.behavior_count(); ++v)
        REQUIRE(syn.mul(syn.behavior_class(alg.prepend(g, AlgebraTables::identity())), syn.behavior_class(v)) ==
                syn.behavior_class(alg.prepend(g, v)));
  }
}

TEST_CASE("quotient multiplication is associative and acts on types") {
  Rng rng(21);
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    const auto& syn = s.syn;
    const auto nv = syn.behavior_count(), nh = syn.type_count();
    for (int i = 0; i < 2000; ++i) {
      const auto x = static_cast<std::uint32_t>(uniform(rng, nv)), y = static_cast<std::uint32_t>(uniform(rng, nv)),
                 z = static_cast<std::uint32_t>(uniform(rng, nv)), h = static_cast<std::uint32_t>(uniform(rng, nh));
      REQUIRE(syn.mul(syn.mul(x, y), z) == syn.mul(x, syn.mul(y, z)));
      REQUIRE(syn.apply(syn.mul(x, y), h) == syn.apply(x, syn.apply(y, h)));
      REQUIRE(syn.mul(syn.identity(), x) == x);
      REQUIRE(syn.mul(x, syn.identity()) == x);
      // (xy)^omega = x (yx)^omega
      if (syn.omega(syn.mul(x, y)) != kNone && syn.omega(syn.mul(y, x)) != kNone)
        REQUIRE(syn.omega(syn.mul(x, y)) == syn.apply(x, syn.omega(syn.mul(y, x))));
    }
  }
}

TEST_CASE("quotient classes agree with direct types of sampled trees and contexts") {
  Rng rng(22);
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    for (int i = 0; i < 60; ++i) {
      const auto c = random_context(s.pair.alphabet(), rng, 3, 3, true);
      const auto t = random_tree(s.pair.alphabet(), rng, 4, i % 4 == 0);
      const auto v = s.alg.find_behavior(behavior_of_context(c, s.pair));
      const auto h = s.alg.find_type(type_of_tree(t, s.pair));
      const auto ct = s.alg.find_type(type_of_tree(plug(c, t), s.pair));
      REQUIRE(v);
      REQUIRE(h);
      REQUIRE(ct);
      const auto vc = s.syn.behavior_class(*v);
      REQUIRE(s.syn.finite_behaviors().test(vc));
      REQUIRE(s.syn.apply(vc, s.syn.type_class(*h)) == s.syn.type_class(*ct));
      if (t.is_acyclic()) REQUIRE(s.syn.finite_types().test(s.syn.type_class(*h)));
    }
  }
}

TEST_CASE("prefix summaries") {
  const Setup s(AutomatonPair(parse_automaton(kAllA), parse_automaton(kSomeB)));
  const auto ab = s.pair.alphabet();
  const auto port = prefix_summary(RegularTree::single_port(ab), s.syn);
  CHECK(port.types == s.syn.finite_types());
  CHECK(port.behaviors == s.syn.finite_behaviors());
  for (Symbol a = 0; a < static_cast<Symbol>(ab->size()); ++a) {
    const auto leaf = prefix_summary(RegularTree::single_leaf(ab, a), s.syn);
    CHECK(leaf.types.count() == 1);
    CHECK(leaf.types.test(s.syn.leaf(a)));
    CHECK(leaf.behaviors.none());
  }
  Rng rng(23);
  const auto cyclic = random_tree(ab, rng, 3);
  if (!cyclic.is_acyclic()) CHECK_THROWS_AS(prefix_summary(cyclic, s.syn), TreeError);
}

TEST_CASE("limit summaries are the limit of level prefix summaries") {
  Rng rng(24);
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    for (int i = 0; i < 25; ++i) {
      const auto t = random_tree(s.pair.alphabet(), rng, 4);
      std::optional<PrefixSummary> prev;
      for (unsigned d = 0; d <= 14; ++d) {
        auto cur = prefix_summary(level_prefix(t, d).prefix.tree(), s.syn);
        if (prev) {
          REQUIRE(cur.types.is_subset_of(prev->types));
          REQUIRE(cur.behaviors.is_subset_of(prev->behaviors));
        }
        prev = std::move(cur);
      }
      const auto lim = limit_summary(t, s.syn)[RegularTree::root()];
      const auto deeper = prefix_summary(level_prefix(t, 15).prefix.tree(), s.syn);
      if (deeper.types == prev->types && deeper.behaviors == prev->behaviors) {
        CHECK(lim.types == prev->types);
        CHECK(lim.behaviors == prev->behaviors);
      }
      // The tree's own type is among its completions' types only when finite.
      const auto h = s.syn.type_class(*s.alg.find_type(type_of_tree(t, s.pair)));
      if (t.is_acyclic()) CHECK(lim.types.test(h));
    }
  }
}

TEST_CASE("sampled decompositions are edges") {
  Rng rng(25);
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    std::size_t found = 0;
    for (int i = 0; i < 120; ++i) {
      const auto c = random_context(s.pair.alphabet(), rng, 3, 3, true);
      const auto sub = random_tree(s.pair.alphabet(), rng, 4);
      const auto t = plug(c, sub);
      const auto v = s.syn.behavior_class(*s.alg.find_behavior(behavior_of_context(c, s.pair)));
      const auto h = s.syn.type_class(*s.alg.find_type(type_of_tree(t, s.pair)));
      const auto reached = limit_summary(sub, s.syn)[RegularTree::root()].behaviors;
      const auto targets = s.graph.targets({v, h});
      reached.for_each([&](std::size_t w) {
        const auto dst = s.syn.mul(v, static_cast<std::uint32_t>(w));
        REQUIRE(targets.test(dst));
        REQUIRE(s.graph.edge({v, h}, {dst, 0}));
        ++found;
      });
    }
    CHECK(found > 0);
  }
}

TEST_CASE("components match a full node-graph reachability oracle") {
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    const auto& g = s.graph;
    const auto nv = g.behavior_count(), nh = g.type_count();
    const std::size_t n = std::size_t{nv} * nh;
    auto node = [&](std::size_t i) { return StrategyNode{static_cast<std::uint32_t>(i / nh), static_cast<std::uint32_t>(i % nh)}; };
    // reach[i]: nodes reachable from i by a nonempty path.
    std::vector<Bitset> reach(n, Bitset(n));
    std::vector<Bitset> succ(n, Bitset(n));
    std::uint64_t edges = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g.targets(node(i)).for_each([&](std::size_t w) {
        for (std::uint32_t h = 0; h < nh; ++h) succ[i].set(w * nh + h);
      });
      edges += succ[i].count();
    }
    CHECK(edges == g.stats().edges);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> todo;
      succ[i].for_each([&](std::size_t j) { todo.push_back(j); });
      reach[i] = succ[i];
      while (!todo.empty()) {
        const auto j = todo.back();
        todo.pop_back();
        succ[j].for_each([&](std::size_t k) {
          if (!reach[i].test(k)) {
            reach[i].set(k);
            todo.push_back(k);
          }
        });
      }
    }
    bool recursive = false;
    std::uint64_t cyc = 0;
    std::set<std::size_t> comps;
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(g.on_cycle(node(i)) == reach[i].test(i));
      cyc += reach[i].test(i);
      comps.insert(g.component(node(i)));
      if (!reach[i].test(i)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!reach[i].test(j) || !reach[j].test(i)) {
          if (g.on_cycle(node(j))) REQUIRE(g.component(node(i)) != g.component(node(j)));
          continue;
        }
        REQUIRE(g.component(node(i)) == g.component(node(j)));
        if (node(i).type != node(j).type) recursive = true;
      }
    }
    CHECK(cyc == g.stats().cyclic_nodes);
    CHECK(comps.size() == g.stats().sccs);
    CHECK(g.recursive() == recursive);
    if (auto w = g.witness()) {
      CHECK(w->first.type != w->second.type);
      CHECK(g.component(w->first) == g.component(w->second));
    }
  }
}

TEST_CASE("every two-step path has a direct edge") {
  for (const auto& name : small_entries()) {
    CAPTURE(name);
    const Setup s(corpus_pair(corpus_entry(name)));
    const auto& g = s.graph;
    const auto nv = g.behavior_count(), nh = g.type_count();
    std::vector<Bitset> any(nv, Bitset(nv));
    for (std::uint32_t w = 0; w < nv; ++w)
      for (std::uint32_t h = 0; h < nh; ++h) any[w] |= g.targets({w, h});
    std::uint64_t bad = 0;
    for (std::uint32_t v = 0; v < nv; ++v)
      for (std::uint32_t h = 0; h < nh; ++h) {
        const auto t = g.targets({v, h});
        Bitset two(nv);
        t.for_each([&](std::size_t w) { two |= any[w]; });
        two.subtract(t);
        bad += two.count();
      }
    CHECK(bad == 0);
    CHECK(g.path_edge_violations() == 0);
    CHECK_FALSE(g.recursive());
  }
}

TEST_CASE("graph order and dot output") {
  const Setup s(corpus_pair(corpus_entry("omega-example")));
  const auto& g = s.graph;
  for (std::uint32_t z = 0; z < g.behavior_count(); ++z) {
    CHECK(g.below(z, z));
    for (auto st : s.syn.finite_step_classes()) CHECK(g.below(s.syn.mul(z, st), z));
  }
  const auto dot = g.to_dot();
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("color=red") == std::string::npos);
  const auto small = g.to_dot(5);
  CHECK(small.find("cyclic nodes shown") != std::string::npos);
}

TEST_CASE("incomplete algebras are refused") {
  const auto p = corpus_pair(corpus_entry("omega-example"));
  const auto alg = AlgebraTables::compute(p, 5);
  REQUIRE_FALSE(alg.complete());
  CHECK_THROWS_AS(SyntacticAlgebra{alg}, std::invalid_argument);
  const auto full = AlgebraTables::compute(p, 60000);
  CHECK_THROWS_AS(SyntacticAlgebra(full, 2), std::length_error);
}
