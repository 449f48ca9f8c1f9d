#include "wadge/syntactic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace wadge {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h = hash_combine(h, x);
    return h;
  }
};

// Renumbers by signature; returns the class count.
std::uint32_t refine(std::vector<std::uint32_t>& cls, const std::vector<std::vector<std::uint32_t>>& sig) {
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> index;
  for (std::size_t i = 0; i < sig.size(); ++i)
    cls[i] = index.emplace(sig[i], static_cast<std::uint32_t>(index.size())).first->second;
  return static_cast<std::uint32_t>(index.size());
}

}  // namespace

SyntacticAlgebra::SyntacticAlgebra(const AlgebraTables& alg, std::size_t max_behaviors) : alg_(&alg) {
  if (!alg.complete()) throw std::invalid_argument("syntactic quotient needs a complete algebra");
  const auto th = static_cast<std::uint32_t>(alg.type_count());
  const auto tv = static_cast<std::uint32_t>(alg.behavior_count());
  const auto tg = static_cast<std::uint32_t>(alg.generator_count());
  na_ = static_cast<std::uint32_t>(alg.pair().alphabet()->size());

  auto gen_apply = [&](std::uint32_t g, std::uint32_t h) {
    const auto& gen = alg.generator(g);
    if (!gen.side) return alg.unary(gen.label, gen.port, h);
    return gen.port == Direction::Left ? alg.binary(gen.label, h, *gen.side) : alg.binary(gen.label, *gen.side, h);
  };
  // app[v * th + h], by recipe order.
  std::vector<std::uint32_t> app(std::size_t{tv} * th);
  for (std::uint32_t v = 0; v < tv; ++v) {
    const auto& r = alg.behavior_recipe(v);
    for (std::uint32_t h = 0; h < th; ++h)
      app[std::size_t{v} * th + h] = r.identity ? h : gen_apply(r.generator, app[std::size_t{r.inner} * th + h]);
  }
  std::vector<std::uint32_t> gen_behavior(tg);
  for (std::uint32_t g = 0; g < tg; ++g) gen_behavior[g] = alg.prepend(g, AlgebraTables::identity());

  std::vector<std::uint32_t> tc(th), vc(tv, 0);
  for (std::uint32_t h = 0; h < th; ++h) tc[h] = alg.type(h).in_l ? 1 : 0;
  std::uint32_t ntc = 0, nvc = 1;
  for (std::uint32_t h = 0; h < th; ++h) ntc = std::max(ntc, tc[h] + 1);
  for (;;) {
    std::vector<std::vector<std::uint32_t>> ts(th), vs(tv);
    for (std::uint32_t h = 0; h < th; ++h) {
      auto& s = ts[h];
      s.push_back(tc[h]);
      for (std::uint32_t g = 0; g < tg; ++g) s.push_back(tc[gen_apply(g, h)]);
      for (Symbol a = 0; a < static_cast<Symbol>(na_); ++a)
        for (auto d : {Direction::Left, Direction::Right}) s.push_back(vc[gen_behavior[alg.generator_id(a, d, h)]]);
    }
    for (std::uint32_t v = 0; v < tv; ++v) {
      auto& s = vs[v];
      s.push_back(vc[v]);
      for (std::uint32_t h = 0; h < th; ++h) s.push_back(tc[app[std::size_t{v} * th + h]]);
      const auto o = alg.omega_of(v);
      s.push_back(o == kNone ? kNone : tc[o]);
      for (std::uint32_t g = 0; g < tg; ++g) s.push_back(vc[alg.prepend(g, v)]);
    }
    const auto nt = refine(tc, ts);
    const auto nv = refine(vc, vs);
    const bool stable = nt == ntc && nv == nvc;
    ntc = nt;
    nvc = nv;
    if (stable) break;
  }
  nh_ = ntc;
  nv_ = nvc;
  if (nv_ > max_behaviors) throw std::length_error("too many behavior classes for the multiplication table");

  // Renumber classes by least member so numbering follows saturation order.
  auto renumber = [](std::vector<std::uint32_t>& cls, std::uint32_t n, std::vector<std::uint32_t>& rep) {
    std::vector<std::uint32_t> order(n, kNone);
    std::uint32_t next = 0;
    for (auto& c : cls) {
      if (order[c] == kNone) order[c] = next++;
      c = order[c];
    }
    rep.assign(n, kNone);
    for (std::uint32_t i = static_cast<std::uint32_t>(cls.size()); i-- > 0;) rep[cls[i]] = i;
  };
  renumber(tc, nh_, type_rep_);
  renumber(vc, nv_, behavior_rep_);
  type_class_ = std::move(tc);
  behavior_class_ = std::move(vc);

  in_l_.resize(nh_);
  for (std::uint32_t c = 0; c < nh_; ++c) in_l_[c] = alg.type(type_rep_[c]).in_l;
  leaf_.resize(na_);
  unary_.resize(std::size_t{na_} * 2 * nh_);
  binary_.resize(std::size_t{na_} * nh_ * nh_);
  plain_step_.resize(std::size_t{na_} * 2);
  side_step_.resize(std::size_t{na_} * 2 * nh_);
  for (Symbol a = 0; a < static_cast<Symbol>(na_); ++a) {
    leaf_[a] = type_class_[alg.leaf(a)];
    for (auto d : {Direction::Left, Direction::Right}) {
      const std::size_t k = a * 2 + static_cast<unsigned>(d);
      plain_step_[k] = behavior_class_[gen_behavior[alg.generator_id(a, d, std::nullopt)]];
      for (std::uint32_t h = 0; h < nh_; ++h) {
        unary_[k * nh_ + h] = type_class_[alg.unary(a, d, type_rep_[h])];
        side_step_[k * nh_ + h] = behavior_class_[gen_behavior[alg.generator_id(a, d, type_rep_[h])]];
      }
    }
    for (std::uint32_t l = 0; l < nh_; ++l)
      for (std::uint32_t r = 0; r < nh_; ++r)
        binary_[(a * nh_ + l) * nh_ + r] = type_class_[alg.binary(a, type_rep_[l], type_rep_[r])];
  }

  apply_.resize(std::size_t{nv_} * nh_);
  omega_.assign(nv_, kNone);
  for (std::uint32_t c = 0; c < nv_; ++c)
    for (std::uint32_t h = 0; h < nh_; ++h)
      apply_[std::size_t{c} * nh_ + h] = type_class_[app[std::size_t{behavior_rep_[c]} * th + type_rep_[h]]];
  for (std::uint32_t v = 0; v < tv; ++v)
    if (alg.omega_of(v) != kNone && omega_[behavior_class_[v]] == kNone)
      omega_[behavior_class_[v]] = type_class_[alg.omega_of(v)];

  // Rows of the multiplication table in order of representative id: the
  // inner part of a representative's recipe has a smaller id.
  std::vector<std::uint32_t> class_order(nv_);
  std::iota(class_order.begin(), class_order.end(), 0u);
  std::sort(class_order.begin(), class_order.end(),
            [&](auto x, auto y) { return behavior_rep_[x] < behavior_rep_[y]; });
  mul_.assign(std::size_t{nv_} * nv_, kNone);
  std::vector<std::vector<std::uint32_t>> gen_row(tg);
  auto row_of = [&](std::uint32_t g) -> const std::vector<std::uint32_t>& {
    auto& row = gen_row[g];
    if (row.empty()) {
      row.resize(nv_);
      for (std::uint32_t y = 0; y < nv_; ++y) row[y] = behavior_class_[alg.prepend(g, behavior_rep_[y])];
    }
    return row;
  };
  for (auto c : class_order) {
    const auto& r = alg.behavior_recipe(behavior_rep_[c]);
    auto* out = &mul_[std::size_t{c} * nv_];
    if (r.identity) {
      std::iota(out, out + nv_, 0u);
      continue;
    }
    const auto& g = row_of(r.generator);
    const auto* in = &mul_[std::size_t{behavior_class_[r.inner]} * nv_];
    for (std::uint32_t y = 0; y < nv_; ++y) out[y] = g[in[y]];
  }

  for (auto s : plain_step_) step_classes_.push_back(s);
  for (auto s : side_step_) step_classes_.push_back(s);
  std::sort(step_classes_.begin(), step_classes_.end());
  step_classes_.erase(std::unique(step_classes_.begin(), step_classes_.end()), step_classes_.end());

  finite_types_ = Bitset(nh_);
  for (Symbol a = 0; a < static_cast<Symbol>(na_); ++a) finite_types_.set(leaf_[a]);
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::uint32_t> fin;
    finite_types_.for_each([&](std::size_t h) { fin.push_back(static_cast<std::uint32_t>(h)); });
    auto add = [&](std::uint32_t h) {
      if (!finite_types_.test(h)) {
        finite_types_.set(h);
        grew = true;
      }
    };
    for (Symbol a = 0; a < static_cast<Symbol>(na_); ++a)
      for (auto x : fin) {
        add(unary(a, Direction::Left, x));
        add(unary(a, Direction::Right, x));
        for (auto y : fin) add(binary(a, x, y));
      }
  }
  for (Symbol a = 0; a < static_cast<Symbol>(na_); ++a)
    for (auto d : {Direction::Left, Direction::Right}) {
      finite_steps_.push_back(step(a, d, std::nullopt));
      finite_types_.for_each([&](std::size_t h) { finite_steps_.push_back(step(a, d, static_cast<std::uint32_t>(h))); });
    }
  std::sort(finite_steps_.begin(), finite_steps_.end());
  finite_steps_.erase(std::unique(finite_steps_.begin(), finite_steps_.end()), finite_steps_.end());
  finite_behaviors_ = Bitset(nv_);
  std::vector<std::uint32_t> todo{identity()};
  finite_behaviors_.set(identity());
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    for (auto s : finite_steps_) {
      const auto w = mul(s, v);
      if (!finite_behaviors_.test(w)) {
        finite_behaviors_.set(w);
        todo.push_back(w);
      }
    }
  }
}

}  // namespace wadge
