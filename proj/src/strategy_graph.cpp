#include "wadge/strategy_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "wadge/scc.hpp"

namespace wadge {

namespace {

// x . S for a set of behaviors
void left_image(const SyntacticAlgebra& alg, std::uint32_t x, const Bitset& s, Bitset& out) {
  s.for_each([&](std::size_t y) { out.set(alg.mul(x, static_cast<std::uint32_t>(y))); });
}

// One node of a tree given the summaries of its children.
PrefixSummary combine(const SyntacticAlgebra& alg, const TreeNode& n, const PrefixSummary* l, const PrefixSummary* r) {
  const auto nh = alg.type_count(), nv = alg.behavior_count();
  PrefixSummary out{Bitset(nh), Bitset(nv)};
  if (n.is_port()) return {alg.finite_types(), alg.finite_behaviors()};
  const Symbol a = n.label;
  if (!l && !r) {
    out.types.set(alg.leaf(a));
  } else if (!r || !l) {
    const auto d = l ? Direction::Left : Direction::Right;
    const auto* c = l ? l : r;
    c->types.for_each([&](std::size_t f) { out.types.set(alg.unary(a, d, static_cast<std::uint32_t>(f))); });
    left_image(alg, alg.step(a, d, std::nullopt), c->behaviors, out.behaviors);
  } else {
    l->types.for_each([&](std::size_t x) {
      r->types.for_each([&](std::size_t y) {
        out.types.set(alg.binary(a, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)));
      });
    });
    Bitset seen(nv);
    r->types.for_each([&](std::size_t f) { seen.set(alg.step(a, Direction::Left, static_cast<std::uint32_t>(f))); });
    seen.for_each([&](std::size_t g) { left_image(alg, static_cast<std::uint32_t>(g), l->behaviors, out.behaviors); });
    seen.clear();
    l->types.for_each([&](std::size_t f) { seen.set(alg.step(a, Direction::Right, static_cast<std::uint32_t>(f))); });
    seen.for_each([&](std::size_t g) { left_image(alg, static_cast<std::uint32_t>(g), r->behaviors, out.behaviors); });
  }
  return out;
}

}  // namespace

PrefixSummary prefix_summary(const RegularTree& prefix, const SyntacticAlgebra& alg) {
  if (!prefix.is_acyclic()) throw TreeError("prefix summary of an infinite tree");
  const auto& nodes = prefix.nodes();
  std::vector<PrefixSummary> sum(nodes.size());
  // Breadth-first numbering: children have larger ids.
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const auto& n = nodes[i];
    sum[i] = combine(alg, n, n.left ? &sum[*n.left] : nullptr, n.right ? &sum[*n.right] : nullptr);
  }
  return sum[RegularTree::root()];
}

std::vector<PrefixSummary> limit_summary(const RegularTree& tree, const SyntacticAlgebra& alg) {
  const auto& nodes = tree.nodes();
  // Round d is the summary of the level-d prefix, whose cut nodes are ports.
  std::vector<PrefixSummary> sum(nodes.size(), PrefixSummary{alg.finite_types(), alg.finite_behaviors()});
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<PrefixSummary> next(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      next[i] = combine(alg, n, n.left ? &sum[*n.left] : nullptr, n.right ? &sum[*n.right] : nullptr);
      if (next[i].types != sum[i].types || next[i].behaviors != sum[i].behaviors) changed = true;
    }
    sum = std::move(next);
  }
  return sum;
}

StrategyGraph StrategyGraph::build(const SyntacticAlgebra& alg) {
  StrategyGraph g;
  g.alg_ = &alg;
  const std::uint32_t nv = alg.behavior_count(), nh = alg.type_count();
  const auto na = static_cast<Symbol>(alg.symbol_count());
  g.nv_ = nv;
  g.nh_ = nh;
  const std::uint32_t one = alg.identity();

  // z V_fin: completions only plug finite contexts.
  const Bitset& vfin = alg.finite_behaviors();
  g.down_.assign(nv, Bitset(nv));
  for (std::uint32_t z = 0; z < nv; ++z)
    vfin.for_each([&](std::size_t w) { g.down_[z].set(alg.mul(z, static_cast<std::uint32_t>(w))); });
  std::vector<std::uint32_t> height(nv);
  for (std::uint32_t z = 0; z < nv; ++z) height[z] = static_cast<std::uint32_t>(g.down_[z].count());
  // Generators of the ideal spanned by `elems`, one per maximal element.
  auto antichain = [&](std::vector<std::uint32_t> elems) {
    std::sort(elems.begin(), elems.end(), [&](auto x, auto y) {
      return height[x] != height[y] ? height[x] > height[y] : x < y;
    });
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    std::vector<std::uint32_t> out;
    for (auto z : elems) {
      bool covered = false;
      for (auto y : out)
        if (g.down_[y].test(z)) {
          covered = true;
          break;
        }
      if (!covered) out.push_back(z);
    }
    return out;
  };

  // Joint fixpoint: C holds (exact type, closure type) of one tree, P holds
  // (exact, closure) behaviors of one path with such sides, and the pair
  // steps are the single nodes of those paths.
  Bitset cset(std::size_t{nh} * nh), pset(std::size_t{nv} * nv), sset(std::size_t{nv} * nv);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cl, pl, steps, idem;
  bool one_nonempty = false;
  enum class Ev { C, P, S, IdentityLoop };
  std::deque<std::pair<Ev, std::uint32_t>> queue;
  auto add_c = [&](std::uint32_t h, std::uint32_t f) {
    if (cset.test(std::size_t{h} * nh + f)) return;
    cset.set(std::size_t{h} * nh + f);
    queue.push_back({Ev::C, static_cast<std::uint32_t>(cl.size())});
    cl.push_back({h, f});
  };
  auto add_p = [&](std::uint32_t x, std::uint32_t y) {
    if (x == one && y == one && !one_nonempty) {
      one_nonempty = true;
      queue.push_back({Ev::IdentityLoop, 0});
    }
    if (pset.test(std::size_t{x} * nv + y)) return;
    pset.set(std::size_t{x} * nv + y);
    queue.push_back({Ev::P, static_cast<std::uint32_t>(pl.size())});
    pl.push_back({x, y});
  };
  auto add_s = [&](std::uint32_t x, std::uint32_t y) {
    if (sset.test(std::size_t{x} * nv + y)) return;
    sset.set(std::size_t{x} * nv + y);
    queue.push_back({Ev::S, static_cast<std::uint32_t>(steps.size())});
    steps.push_back({x, y});
  };
  auto on_idempotent = [&](std::uint32_t x, std::uint32_t y) {
    if (alg.mul(x, x) != x || alg.mul(y, y) != y) return;
    const auto o = alg.omega(x);
    if (o == kNone) return;
    idem.push_back({x, y});
    alg.finite_types().for_each([&](std::size_t h) { add_c(o, alg.apply(y, static_cast<std::uint32_t>(h))); });
  };

  pset.set(std::size_t{one} * nv + one);
  pl.push_back({one, one});
  for (Symbol a = 0; a < na; ++a) {
    add_c(alg.leaf(a), alg.leaf(a));
    for (auto d : {Direction::Left, Direction::Right}) add_s(alg.step(a, d, std::nullopt), alg.step(a, d, std::nullopt));
  }
  std::size_t c_done = 0, p_done = 1, s_done = 0;
  while (!queue.empty()) {
    const auto [kind, i] = queue.front();
    queue.pop_front();
    switch (kind) {
      case Ev::C: {
        const auto [h, f] = cl[i];
        for (Symbol a = 0; a < na; ++a) {
          for (auto d : {Direction::Left, Direction::Right}) {
            add_c(alg.unary(a, d, h), alg.unary(a, d, f));
            add_s(alg.step(a, d, h), alg.step(a, d, f));
          }
          for (std::size_t j = 0; j <= i; ++j) {
            const auto [h2, f2] = cl[j];
            add_c(alg.binary(a, h, h2), alg.binary(a, f, f2));
            add_c(alg.binary(a, h2, h), alg.binary(a, f2, f));
          }
        }
        c_done = i + 1;
        break;
      }
      case Ev::S: {
        const auto [ge, gc] = steps[i];
        for (std::size_t j = 0; j < p_done; ++j) add_p(alg.mul(ge, pl[j].first), alg.mul(gc, pl[j].second));
        s_done = i + 1;
        break;
      }
      case Ev::P: {
        const auto [x, y] = pl[i];
        for (std::size_t j = 0; j < s_done; ++j) add_p(alg.mul(steps[j].first, x), alg.mul(steps[j].second, y));
        on_idempotent(x, y);
        p_done = i + 1;
        break;
      }
      case Ev::IdentityLoop:
        on_idempotent(one, one);
        break;
    }
  }
  (void)c_done;
  // The initial identity pair is the empty path and only enters P once.
  // Its successors for pair steps were added when the steps were processed.

  // Q: (type of a tree, closure behavior along an infinite branch of it).
  Bitset qset(std::size_t{nh} * nv);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ql;
  auto add_q = [&](std::uint32_t h, std::uint32_t z) {
    if (qset.test(std::size_t{h} * nv + z)) return;
    qset.set(std::size_t{h} * nv + z);
    ql.push_back({h, z});
  };
  for (auto [e1, e2] : idem) add_q(alg.omega(e1), e2);
  for (std::size_t i = 0; i < ql.size(); ++i) {
    const auto [h, z] = ql[i];
    for (auto [ge, gc] : steps) add_q(alg.apply(ge, h), alg.mul(gc, z));
  }
  std::vector<std::vector<std::uint32_t>> zmax(nh);
  {
    std::vector<std::vector<std::uint32_t>> zq(nh);
    for (auto [h, z] : ql) zq[h].push_back(z);
    for (std::uint32_t h = 0; h < nh; ++h) zmax[h] = antichain(std::move(zq[h]));
  }

  // A decomposition context is finite, so every infinite branch of the tree
  // runs through its port: R(v,h) is spanned by v.z for the branch limits z
  // of the plugged tree.
  g.gens_.assign(std::size_t{nv} * nh, {});
  std::vector<Bitset> any_reached(nv, Bitset(nv));
  alg.finite_behaviors().for_each([&](std::size_t vi) {
    const auto v = static_cast<std::uint32_t>(vi);
    std::vector<std::vector<std::uint32_t>> elems(nh);
    for (std::uint32_t hr = 0; hr < nh; ++hr)
      for (auto z : zmax[hr]) elems[alg.apply(v, hr)].push_back(alg.mul(v, z));
    for (std::uint32_t h = 0; h < nh; ++h) {
      if (elems[h].empty()) continue;
      auto& out = g.gens_[std::size_t{v} * nh + h];
      out = antichain(std::move(elems[h]));
      for (auto z : out) any_reached[v] |= g.down_[z];
    }
  });

  g.stats_.nodes = std::uint64_t{nv} * nh;
  g.stats_.closure_pairs = cl.size();
  g.stats_.path_pairs = pl.size();
  g.stats_.limit_pairs = ql.size();

  // Behavior graph v -> w for every target w of some node (v, h).
  const auto vs = tarjan_scc(nv, [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
    any_reached[v].for_each([&](std::size_t w) { out.push_back(static_cast<std::uint32_t>(w)); });
  });
  g.vcomp_ = vs.component;
  std::vector<Bitset> members;
  std::vector<std::uint32_t> member_slot(vs.count, kNone);
  auto members_of = [&](std::uint32_t c) -> const Bitset& {
    if (member_slot[c] == kNone) {
      member_slot[c] = static_cast<std::uint32_t>(members.size());
      Bitset b(nv);
      for (std::uint32_t v = 0; v < nv; ++v)
        if (vs.component[v] == c) b.set(v);
      members.push_back(std::move(b));
    }
    return members[member_slot[c]];
  };
  g.cyclic_node_.assign(std::size_t{nv} * nh, false);
  g.cyclic_id_.assign(vs.count, kNone);
  for (std::uint32_t v = 0; v < nv; ++v) {
    if (!any_reached[v].intersects(members_of(vs.component[v]))) continue;
    for (std::uint32_t h = 0; h < nh; ++h) {
      const StrategyNode n{v, h};
      if (g.gens_[g.index(n)].empty() || !g.targets(n).intersects(members_of(vs.component[v]))) continue;
      g.cyclic_node_[g.index(n)] = true;
      auto& id = g.cyclic_id_[vs.component[v]];
      if (id == kNone) {
        id = static_cast<std::uint32_t>(g.cyclic_.size());
        g.cyclic_.emplace_back();
      }
      g.cyclic_[id].push_back(n);
      ++g.stats_.cyclic_nodes;
    }
  }
  for (const auto& comp : g.cyclic_) {
    if (g.witness_) break;
    for (const auto& n : comp)
      if (n.type != comp.front().type) {
        g.witness_ = {comp.front(), n};
        break;
      }
  }
  g.stats_.sccs = g.stats_.nodes - g.stats_.cyclic_nodes + g.cyclic_.size();
  for (std::size_t i = 0; i < g.gens_.size(); ++i)
    if (!g.gens_[i].empty())
      g.stats_.edges += std::uint64_t{nh} * g.targets({static_cast<std::uint32_t>(i / nh), static_cast<std::uint32_t>(i % nh)}).count();

  // Targets of targets: for each z, the union of the targets of every
  // behavior below z, over components of the right multiplication graph.
  const auto& step_classes = alg.finite_step_classes();
  const auto rs = tarjan_scc(nv, [&](std::uint32_t z, std::vector<std::uint32_t>& out) {
    for (auto s : step_classes) out.push_back(alg.mul(z, s));
  });
  std::vector<Bitset> comp_next(rs.count, Bitset(nv));
  std::vector<std::vector<std::uint32_t>> comp_members(rs.count);
  for (std::uint32_t z = 0; z < nv; ++z) comp_members[rs.component[z]].push_back(z);
  for (std::uint32_t c = 0; c < rs.count; ++c) {
    for (auto z : comp_members[c]) {
      comp_next[c] |= any_reached[z];
      for (auto s : step_classes) {
        const auto d = rs.component[alg.mul(z, s)];
        if (d != c) comp_next[c] |= comp_next[d];
      }
    }
  }
  for (std::size_t i = 0; i < g.gens_.size(); ++i) {
    if (g.gens_[i].empty()) continue;
    Bitset two(nv);
    for (auto z : g.gens_[i]) two |= comp_next[rs.component[z]];
    two.subtract(g.targets({static_cast<std::uint32_t>(i / nh), static_cast<std::uint32_t>(i % nh)}));
    g.violations_ += std::uint64_t{nh} * two.count();
  }
  return g;
}

Bitset StrategyGraph::targets(StrategyNode src) const {
  Bitset out(nv_);
  for (auto z : gens_[index(src)]) out |= down_[z];
  return out;
}

bool StrategyGraph::edge(StrategyNode src, StrategyNode dst) const {
  for (auto z : gens_[index(src)])
    if (down_[z].test(dst.behavior)) return true;
  return false;
}

bool StrategyGraph::on_cycle(StrategyNode n) const { return cyclic_node_[index(n)]; }

std::uint64_t StrategyGraph::component(StrategyNode n) const {
  if (on_cycle(n)) return cyclic_id_[vcomp_[n.behavior]];
  return cyclic_.size() + index(n);
}

std::string StrategyGraph::to_dot(std::size_t max_nodes) const {
  std::ostringstream os;
  const bool all = std::uint64_t{nv_} * nh_ <= max_nodes;
  std::vector<StrategyNode> shown;
  if (all) {
    for (std::uint32_t v = 0; v < nv_; ++v)
      for (std::uint32_t h = 0; h < nh_; ++h) shown.push_back({v, h});
  } else {
    for (const auto& comp : cyclic_)
      for (const auto& n : comp)
        if (shown.size() < max_nodes) shown.push_back(n);
    std::sort(shown.begin(), shown.end());
  }
  auto name = [](StrategyNode n) { return "v" + std::to_string(n.behavior) + "/h" + std::to_string(n.type); };
  os << "digraph strategy {\n";
  if (!all) os << "  // " << shown.size() << " of " << stats_.cyclic_nodes << " cyclic nodes shown\n";
  std::vector<bool> drawn(cyclic_.size(), false);
  for (const auto& n : shown) {
    if (!on_cycle(n)) continue;
    const auto c = cyclic_id_[vcomp_[n.behavior]];
    if (drawn[c]) continue;
    drawn[c] = true;
    const auto& comp = cyclic_[c];
    bool mixed = false;
    for (const auto& m : comp) mixed = mixed || m.type != comp.front().type;
    os << "  subgraph cluster_" << c << " {\n";
    os << "    label=\"scc " << c << (mixed ? " recursive" : "") << "\";\n";
    if (mixed) os << "    color=red; style=bold;\n";
    for (const auto& m : comp)
      if (std::binary_search(shown.begin(), shown.end(), m)) os << "    \"" << name(m) << "\";\n";
    os << "  }\n";
  }
  for (const auto& n : shown)
    if (!on_cycle(n)) os << "  \"" << name(n) << "\";\n";
  for (const auto& n : shown) {
    const auto t = targets(n);
    for (const auto& m : shown)
      if (t.test(m.behavior)) os << "  \"" << name(n) << "\" -> \"" << name(m) << "\";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace wadge
