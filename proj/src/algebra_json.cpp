#include <json.hpp>

#include "wadge/algebra.hpp"
#include "wadge/digest.hpp"

namespace wadge {

using nlohmann::json;

namespace {

json bits(const Bitset& b) {
  json out = json::array();
  b.for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

Bitset bits_from(const json& j, std::size_t n) {
  Bitset b(n);
  for (const auto& i : j) {
    const auto v = i.get<std::size_t>();
    if (v >= n) throw std::invalid_argument("state index out of range in algebra document");
    b.set(v);
  }
  return b;
}

json triples(const Transfer& t) {
  json out = json::array();
  for (std::size_t q = 0; q < t.states(); ++q)
    for (std::size_t r = 0; r < t.states(); ++r)
      for (unsigned p = 0; p < 32; ++p)
        if ((t.mask(q, r) >> p) & 1) out.push_back({q, p, r});
  return out;
}

Transfer triples_from(const json& j, std::size_t n) {
  Transfer t(n);
  for (const auto& x : j) {
    const auto q = x.at(0).get<std::size_t>(), r = x.at(2).get<std::size_t>();
    const auto p = x.at(1).get<unsigned>();
    if (q >= n || r >= n || p > 31) throw std::invalid_argument("bad triple in algebra document");
    t.add(q, p, r);
  }
  return t;
}

const char* kind_name(TypeRecipe::Kind k) {
  switch (k) {
    case TypeRecipe::Kind::Leaf: return "leaf";
    case TypeRecipe::Kind::Unary: return "unary";
    case TypeRecipe::Kind::Binary: return "binary";
    case TypeRecipe::Kind::Omega: return "omega";
  }
  return "leaf";
}

TypeRecipe::Kind kind_from(const std::string& s) {
  if (s == "leaf") return TypeRecipe::Kind::Leaf;
  if (s == "unary") return TypeRecipe::Kind::Unary;
  if (s == "binary") return TypeRecipe::Kind::Binary;
  if (s == "omega") return TypeRecipe::Kind::Omega;
  throw std::invalid_argument("unknown recipe kind '" + s + "'");
}

}  // namespace

std::string pair_digest(const AutomatonPair& pair) {
  return digest_hex(to_text(pair.positive) + "\n--\n" + to_text(pair.negative));
}

std::string AlgebraTables::to_json() const {
  json doc;
  doc["pair_digest"] = pair_digest(*pair_);
  doc["complete"] = complete_;
  doc["steps"] = steps_;
  json types = json::array();
  for (std::uint32_t h = 0; h < types_.size(); ++h) {
    const TypeRecipe& r = type_recipes_[h];
    json recipe{{"kind", kind_name(r.kind)}, {"label", pair_->alphabet()->name(r.label)}};
    if (r.kind == TypeRecipe::Kind::Unary) {
      recipe["dir"] = r.dir == Direction::Left ? "left" : "right";
      recipe["child"] = r.a;
    }
    if (r.kind == TypeRecipe::Kind::Binary) recipe["children"] = {r.a, r.b};
    if (r.kind == TypeRecipe::Kind::Omega) {
      recipe.erase("label");
      recipe["behavior"] = r.a;
    }
    types.push_back({{"id", h},
                     {"pos", bits(types_[h].pos)},
                     {"neg", bits(types_[h].neg)},
                     {"in_l", types_[h].in_l},
                     {"recipe", recipe},
                     {"witness", to_text(tree_witness(h))}});
  }
  doc["types"] = types;
  json gens = json::array();
  for (const auto& g : generators_) {
    json x{{"label", pair_->alphabet()->name(g.label)}, {"port", g.port == Direction::Left ? "left" : "right"}};
    if (g.side) x["side"] = *g.side;
    gens.push_back(x);
  }
  doc["generators"] = gens;
  json behaviors = json::array();
  for (std::uint32_t v = 0; v < behaviors_.size(); ++v) {
    const BehaviorRecipe& r = behavior_recipes_[v];
    json recipe = r.identity ? json{{"identity", true}} : json{{"generator", r.generator}, {"inner", r.inner}};
    behaviors.push_back({{"id", v},
                         {"pos", triples(behaviors_[v].pos)},
                         {"neg", triples(behaviors_[v].neg)},
                         {"recipe", recipe}});
  }
  doc["behaviors"] = behaviors;
  if (identity_loop_) doc["identity_loop"] = {identity_loop_->first, identity_loop_->second};
  return doc.dump(1);
}

AlgebraTables AlgebraTables::from_json(const std::string& text, const AutomatonPair& pair) {
  const json doc = json::parse(text);
  if (doc.at("pair_digest").get<std::string>() != pair_digest(pair))
    throw std::invalid_argument("algebra document was computed for a different pair");
  AlgebraTables t;
  t.pair_ = std::make_shared<const AutomatonPair>(pair);
  const auto& p = *t.pair_;
  const auto& ab = *p.alphabet();
  const std::size_t np = p.positive.state_count(), nn = p.negative.state_count();
  t.complete_ = doc.at("complete").get<bool>();
  t.steps_ = doc.at("steps").get<std::size_t>();
  for (const auto& x : doc.at("types")) {
    TypeRecipe r;
    const auto& rj = x.at("recipe");
    r.kind = kind_from(rj.at("kind").get<std::string>());
    if (rj.contains("label")) r.label = ab.at(rj.at("label").get<std::string>());
    if (r.kind == TypeRecipe::Kind::Unary) {
      r.dir = rj.at("dir").get<std::string>() == "left" ? Direction::Left : Direction::Right;
      r.a = rj.at("child").get<std::uint32_t>();
    }
    if (r.kind == TypeRecipe::Kind::Binary) {
      r.a = rj.at("children").at(0).get<std::uint32_t>();
      r.b = rj.at("children").at(1).get<std::uint32_t>();
    }
    if (r.kind == TypeRecipe::Kind::Omega) r.a = rj.at("behavior").get<std::uint32_t>();
    const auto before = t.types_.size();
    t.add_type(make_type(p, bits_from(x.at("pos"), np), bits_from(x.at("neg"), nn)), r);
    if (t.types_.size() == before) throw std::invalid_argument("duplicate type in algebra document");
  }
  for (const auto& x : doc.at("behaviors")) {
    BehaviorRecipe r;
    const auto& rj = x.at("recipe");
    r.identity = rj.contains("identity");
    if (!r.identity) {
      r.generator = rj.at("generator").get<std::uint32_t>();
      r.inner = rj.at("inner").get<std::uint32_t>();
    }
    const auto before = t.behaviors_.size();
    t.add_behavior({triples_from(x.at("pos"), np), triples_from(x.at("neg"), nn)}, r);
    if (t.behaviors_.size() == before) throw std::invalid_argument("duplicate behavior in algebra document");
  }
  t.steps_ = doc.at("steps").get<std::size_t>();
  const auto na = static_cast<Symbol>(ab.size());
  t.unary_.assign(na, std::vector<std::vector<std::uint32_t>>(2));
  t.binary_.assign(na, {});
  t.plain_gen_.assign(na, std::vector<std::uint32_t>(2, kNone));
  t.side_gen_.assign(na, std::vector<std::vector<std::uint32_t>>(2));
  for (const auto& x : doc.at("generators")) {
    Generator g;
    g.label = ab.at(x.at("label").get<std::string>());
    g.port = x.at("port").get<std::string>() == "left" ? Direction::Left : Direction::Right;
    if (x.contains("side")) g.side = x.at("side").get<std::uint32_t>();
    if (g.side && *g.side >= t.types_.size()) throw std::invalid_argument("generator side out of range");
    t.add_generator(g);
  }
  if (doc.contains("identity_loop")) {
    const auto& l = doc.at("identity_loop");
    t.identity_loop_ = std::make_pair(l.at(0).get<std::uint32_t>(), l.at(1).get<std::uint32_t>());
    if (t.identity_loop_->first >= t.generators_.size() || t.identity_loop_->second >= t.behaviors_.size())
      throw std::invalid_argument("identity loop out of range");
  }
  t.rebuild_indexes();
  return t;
}

void AlgebraTables::rebuild_indexes() {
  const auto& p = *pair_;
  const auto na = static_cast<Symbol>(p.alphabet()->size());
  const auto nt = static_cast<std::uint32_t>(types_.size());
  const auto nv = static_cast<std::uint32_t>(behaviors_.size());
  auto lookup_type = [&](const TreeType& x) { return find_type(x).value_or(kNone); };
  leaf_.clear();
  for (Symbol a = 0; a < na; ++a) leaf_.push_back(lookup_type(leaf_type(p, a)));
  for (Symbol a = 0; a < na; ++a) {
    for (auto d : {Direction::Left, Direction::Right}) {
      auto& row = unary_[a][static_cast<std::size_t>(d)];
      row.assign(nt, kNone);
      for (std::uint32_t h = 0; h < nt; ++h) row[h] = lookup_type(unary_type(p, a, d, types_[h]));
    }
    binary_[a].assign(nt, std::vector<std::uint32_t>(nt, kNone));
    for (std::uint32_t l = 0; l < nt; ++l)
      for (std::uint32_t r = 0; r < nt; ++r) binary_[a][l][r] = lookup_type(binary_type(p, a, types_[l], types_[r]));
    for (auto& row : side_gen_[a]) row.resize(nt, kNone);
  }
  for (std::uint32_t g = 0; g < generators_.size(); ++g) {
    auto& row = gen_mult_[g];
    row.assign(nv, kNone);
    for (std::uint32_t v = 0; v < nv; ++v)
      row[v] = find_behavior(compose(generator_behaviors_[g], behaviors_[v])).value_or(kNone);
  }
  for (std::uint32_t v = 0; v < nv; ++v)
    omega_[v] = v == identity() && !identity_loop_ ? kNone : lookup_type(omega(p, behaviors_[v]));
}

}  // namespace wadge
