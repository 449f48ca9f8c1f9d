#include "wadge/canonical.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "wadge/acceptance.hpp"
#include "wadge/digest.hpp"
#include "wadge/errors.hpp"

namespace wadge {

namespace {

constexpr Symbol kA = 0, kB = 1, kArrow = 2, kSup = 3, kTagL = 4, kTagR = 5;

// Incremental construction over the corpus alphabet.
class Builder {
public:
  Builder() : a_(corpus_alphabet()) {}

  ParityTreeAutomaton& aut() { return a_; }
  Symbol symbols() const { return static_cast<Symbol>(a_.alphabet()->size()); }

  StateId state(const std::string& name, unsigned prio, bool init = false) { return a_.add_state(name, prio, init); }

  StateId universal() {
    if (!u_) {
      u_ = a_.add_state("U", 0);
      for (Symbol x = 0; x < symbols(); ++x) all_shapes(*u_, x, *u_, *u_);
    }
    return *u_;
  }

  void all_shapes(StateId q, Symbol x, StateId l, StateId r) {
    a_.add_leaf(q, x);
    a_.add_left(q, x, l);
    a_.add_right(q, x, r);
    a_.add_binary(q, x, l, r);
  }

  // Copy of src plus a fresh non-initial entry state for its language.
  StateId embed(const ParityTreeAutomaton& src, const std::string& prefix) {
    if (!same_alphabet(src.alphabet(), a_.alphabet()))
      throw AlphabetMismatch("operand is not over the corpus alphabet");
    const StateId off = copy_into(a_, src, prefix + ".", false);
    const StateId e = a_.add_state(prefix + ".in", 0);
    for (StateId q : src.initial_states())
      for (Symbol x = 0; x < symbols(); ++x) {
        const Moves& m = src.moves(q, x);
        if (m.leaf) a_.add_leaf(e, x);
        for (auto c : m.left_only) a_.add_left(e, x, c + off);
        for (auto c : m.right_only) a_.add_right(e, x, c + off);
        for (auto [l, r] : m.binary) a_.add_binary(e, x, l + off, r + off);
      }
    return e;
  }

  ParityTreeAutomaton done() { return reduce(a_); }

private:
  ParityTreeAutomaton a_;
  std::optional<StateId> u_;
};

AutomatonPair make_pair(ParityTreeAutomaton pos, ParityTreeAutomaton neg) {
  return AutomatonPair(std::move(pos), std::move(neg));
}

ParityTreeAutomaton arrow_side(const ParityTreeAutomaton& l, const ParityTreeAutomaton& m, bool positive) {
  Builder b;
  const StateId root = b.state("root", 0, true);
  const StateId u = b.universal();
  const StateId le = b.embed(l, "L"), me = b.embed(m, "M");
  const StateId on = b.state("along", 0), off = b.state("search", 1);
  for (Symbol x = 0; x < b.symbols(); ++x) {
    auto& a = b.aut();
    a.add_binary(root, x, le, on);
    a.add_binary(root, x, u, off);
    a.add_right(root, x, off);
    if (!positive) {
      a.add_right(root, x, on);
      a.add_left(root, x, u);
      a.add_leaf(root, x);
    }
    if (x == kArrow) {
      a.add_left(on, x, on);
      a.add_binary(on, x, on, u);
      a.add_left(off, x, off);
      a.add_binary(off, x, off, u);
    } else {
      a.add_left(off, x, me);
      a.add_binary(off, x, me, u);
    }
    if (!positive) {
      a.add_right(off, x, u);
      a.add_leaf(off, x);
    }
  }
  return b.done();
}

ParityTreeAutomaton plus_minus_side(const ParityTreeAutomaton& m, const ParityTreeAutomaton& mc, bool positive) {
  Builder b;
  const StateId root = b.state("root", 0, true);
  const StateId u = b.universal();
  const StateId in = b.embed(m, "M"), out = b.embed(mc, "N");
  auto& a = b.aut();
  for (Symbol x = 0; x < b.symbols(); ++x) {
    if (x != kTagL && x != kTagR) {
      if (!positive) b.all_shapes(root, x, u, u);
      continue;
    }
    const StateId want = (x == kTagL) == positive ? in : out;
    a.add_left(root, x, want);
    a.add_binary(root, x, want, u);
    if (!positive) {
      a.add_right(root, x, u);
      a.add_leaf(root, x);
    }
  }
  return b.done();
}

ParityTreeAutomaton sup_side(const std::vector<const ParityTreeAutomaton*>& ls, bool positive) {
  Builder b;
  const std::size_t n = ls.size();
  std::vector<StateId> c(n), e(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = b.state("c" + std::to_string(j), positive ? 1 : 0, j == 0);
  const StateId u = b.universal();
  for (std::size_t j = 0; j < n; ++j) e[j] = b.embed(*ls[j], "L" + std::to_string(j));
  auto& a = b.aut();
  for (std::size_t j = 0; j < n; ++j) {
    const StateId next = c[(j + 1) % n];
    for (Symbol x = 0; x < b.symbols(); ++x) {
      if (x != kSup) {
        a.add_left(c[j], x, next);
        a.add_binary(c[j], x, next, u);
        if (!positive) {
          a.add_right(c[j], x, u);
          a.add_leaf(c[j], x);
        }
      } else {
        a.add_right(c[j], x, e[j]);
        a.add_binary(c[j], x, u, e[j]);
        if (!positive) {
          a.add_left(c[j], x, u);
          a.add_leaf(c[j], x);
        }
      }
    }
  }
  return b.done();
}

// No @b on 1*, or (some_b) an @b on 1*.
ParityTreeAutomaton right_branch_b(bool some_b) {
  Builder b;
  const StateId r = b.state("r", some_b ? 1 : 0, true);
  const StateId u = b.universal();
  auto& a = b.aut();
  for (Symbol x = 0; x < b.symbols(); ++x) {
    if (x == kSup) {
      if (some_b) b.all_shapes(r, x, u, u);
      continue;
    }
    a.add_right(r, x, r);
    a.add_binary(r, x, u, r);
    if (!some_b) {
      a.add_leaf(r, x);
      a.add_left(r, x, u);
    }
  }
  return b.done();
}

std::vector<const ParityTreeAutomaton*> sides(const std::vector<AutomatonPair>& ls, bool positive) {
  std::vector<const ParityTreeAutomaton*> out;
  for (const auto& l : ls) out.push_back(positive ? &l.positive : &l.negative);
  return out;
}

// Spine 0* with sides t.0^n1: some side in x (positive) or every present
// side outside x.
ParityTreeAutomaton spine_side(const ParityTreeAutomaton& x, bool exists) {
  Builder b;
  const StateId g = b.state("g", exists ? 1 : 0, true);
  const StateId u = b.universal();
  const StateId e = b.embed(x, "X");
  auto& a = b.aut();
  for (Symbol s = 0; s < b.symbols(); ++s) {
    if (exists) {
      a.add_left(g, s, g);
      a.add_binary(g, s, g, u);
      a.add_right(g, s, e);
      a.add_binary(g, s, u, e);
    } else {
      a.add_left(g, s, g);
      a.add_binary(g, s, g, e);
      a.add_right(g, s, e);
      a.add_leaf(g, s);
    }
  }
  return b.done();
}

}  // namespace

AlphabetPtr corpus_alphabet() {
  static const AlphabetPtr ab = make_alphabet({"a", "b", "@a", "@b", "@l", "@r"});
  return ab;
}

AutomatonPair base_closed() {
  Builder p;
  const StateId q = p.state("q", 0, true);
  p.all_shapes(q, kA, q, q);
  Builder n;
  const StateId s = n.state("s", 1, true);
  const StateId u = n.universal();
  for (Symbol x = 0; x < n.symbols(); ++x) {
    if (x == kA) {
      n.aut().add_left(s, x, s);
      n.aut().add_right(s, x, s);
      n.aut().add_binary(s, x, s, u);
      n.aut().add_binary(s, x, u, s);
    } else {
      n.all_shapes(s, x, u, u);
    }
  }
  return make_pair(p.done(), n.done());
}

AutomatonPair base_open() { return base_closed().swapped(); }

AutomatonPair arrow(const AutomatonPair& l, const AutomatonPair& m) {
  return make_pair(arrow_side(l.positive, m.positive, true), arrow_side(l.negative, m.negative, false));
}

AutomatonPair plus_minus(const AutomatonPair& m) {
  return make_pair(plus_minus_side(m.positive, m.negative, true), plus_minus_side(m.positive, m.negative, false));
}

AutomatonPair sum(const AutomatonPair& m, const AutomatonPair& l) { return arrow(l, plus_minus(m)); }

AutomatonPair sup_minus(const std::vector<AutomatonPair>& ls) {
  if (ls.empty()) throw std::invalid_argument("sup over an empty family");
  return make_pair(sup_side(sides(ls, true), true), sup_side(sides(ls, false), false));
}

AutomatonPair sup_plus(const std::vector<AutomatonPair>& ls) {
  const auto base = sup_minus(ls);
  return make_pair(reduce(disjoint_union(base.positive, right_branch_b(false))),
                   reduce(product(base.negative, right_branch_b(true))));
}

AutomatonPair bullet(const AutomatonPair& l, unsigned alpha) {
  if (alpha == kOmega) return sup_plus({bullet(l, 1), bullet(l, 2)});
  if (alpha > 8) throw std::invalid_argument("unsupported ordinal " + std::to_string(alpha));
  if (alpha == 1) return l;
  return sum(bullet(l, alpha - 1), l);
}

AutomatonPair canonical_set(unsigned alpha, char sign) {
  auto p = bullet(base_closed(), alpha);
  if (sign == '-') return p.swapped();
  if (sign != '+') throw std::invalid_argument(std::string("unsupported sign '") + sign + "'");
  return p;
}

AutomatonPair omega_example() {
  Builder p;
  {
    const StateId s0 = p.state("s0", 1, true), s = p.state("s", 1);
    const StateId fin = p.state("fin", 1), nb = p.state("nb", 0);
    const StateId u = p.universal();
    auto& a = p.aut();
    a.add_leaf(s0, kA);
    a.add_left(s0, kA, s);
    a.add_binary(s0, kA, s, u);
    a.add_leaf(s, kA);
    a.add_left(s, kA, s);
    a.add_binary(s, kA, s, fin);
    a.add_binary(s, kA, s, nb);
    for (Symbol x = 0; x < p.symbols(); ++x) {
      p.all_shapes(fin, x, fin, fin);
      if (x != kB) p.all_shapes(nb, x, nb, nb);
    }
  }
  Builder n;
  {
    const StateId z0 = n.state("z0", 0, true), z = n.state("z", 0);
    const StateId e = n.state("e", 1), bq = n.state("bq", 1), inf = n.state("inf", 0);
    const StateId u = n.universal();
    auto& a = n.aut();
    for (Symbol x = 0; x < n.symbols(); ++x) {
      if (x != kA) {
        n.all_shapes(z0, x, u, u);
        n.all_shapes(z, x, u, u);
      }
      a.add_left(inf, x, inf);
      a.add_right(inf, x, inf);
      a.add_binary(inf, x, inf, u);
      a.add_binary(inf, x, u, inf);
      if (x == kB) {
        n.all_shapes(bq, x, u, u);
        a.add_left(e, x, inf);
        a.add_right(e, x, inf);
        a.add_binary(e, x, inf, u);
        a.add_binary(e, x, u, inf);
      } else {
        a.add_left(bq, x, bq);
        a.add_right(bq, x, bq);
        a.add_binary(bq, x, bq, u);
        a.add_binary(bq, x, u, bq);
        a.add_left(e, x, e);
        a.add_right(e, x, e);
        a.add_binary(e, x, e, u);
        a.add_binary(e, x, u, e);
        a.add_binary(e, x, inf, bq);
        a.add_binary(e, x, bq, inf);
      }
    }
    a.add_right(z0, kA, u);
    a.add_left(z0, kA, z);
    a.add_binary(z0, kA, z, u);
    a.add_right(z, kA, u);
    a.add_left(z, kA, z);
    a.add_binary(z, kA, z, u);
    a.add_binary(z, kA, u, e);
  }
  return make_pair(p.done(), n.done());
}

AutomatonPair sigma2_complete() {
  const auto x = canonical_set(3, '-');
  return make_pair(spine_side(x.positive, true), spine_side(x.negative, false));
}

AutomatonPair pi2_complete() { return sigma2_complete().swapped(); }

AutomatonPair overlapping_pair() {
  const auto c = base_closed();
  return make_pair(c.positive, universal_automaton(corpus_alphabet()));
}

AutomatonPair build(const CanonicalSpec& spec) {
  using K = CanonicalSpec::Kind;
  auto arity = [&](std::size_t n) {
    if (spec.operands.size() != n) throw std::invalid_argument("wrong number of operands");
  };
  std::vector<AutomatonPair> ops;
  for (const auto& o : spec.operands) ops.push_back(build(o));
  switch (spec.kind) {
    case K::Arrow: arity(2); return arrow(ops[0], ops[1]);
    case K::PlusMinus: arity(1); return plus_minus(ops[0]);
    case K::Sum: arity(2); return sum(ops[0], ops[1]);
    case K::SupMinus: return sup_minus(ops);
    case K::SupPlus: return sup_plus(ops);
    case K::Bullet: arity(1); return bullet(ops[0], spec.alpha);
    case K::OmegaExample: arity(0); return omega_example();
    case K::Sigma2Complete: arity(0); return sigma2_complete();
    case K::Pi2Complete: arity(0); return pi2_complete();
    case K::BaseClosed: arity(0); return base_closed();
    case K::BaseOpen: arity(0); return base_open();
  }
  throw std::invalid_argument("unknown constructor");
}

std::vector<CorpusEntry> corpus() {
  using K = CanonicalSpec::Kind;
  const CanonicalSpec closed{K::BaseClosed, {}, 1, '+'};
  const CanonicalSpec open{K::BaseOpen, {}, 1, '-'};
  return {
      {"closed-all-a", closed, true, "all-a trees"},
      {"open-some-non-a", open, true, "trees with a label other than a"},
      {"arrow", {K::Arrow, {closed, open}, 1, '+'}, true, "all-a -> some-non-a"},
      {"plus-minus", {K::PlusMinus, {closed}, 1, '+'}, true, "tagged union of all-a and its complement"},
      {"sum", {K::Sum, {closed, closed}, 2, '+'}, true, "[1]^+ + [1]^+"},
      {"sup-minus", {K::SupMinus, {closed, open}, 1, '-'}, true, "sup- of all-a and some-non-a"},
      {"sup-plus", {K::SupPlus, {closed, open}, 1, '+'}, true, "sup+ of all-a and some-non-a"},
      {"bullet-2", {K::Bullet, {closed}, 2, '+'}, true, "[2]^+"},
      {"bullet-3", {K::Bullet, {closed}, 3, '+'}, true, "[3]^+"},
      {"bullet-omega", {K::Bullet, {closed}, kOmega, '+'}, true, "all-a bullet omega, two-step cyclic family"},
      {"omega-example", {K::OmegaExample, {}, 1, '-'}, true, "the [omega]^- example language"},
      {"sigma2", {K::Sigma2Complete, {}, 1, '-'}, false, "some t.0^n1 in [3]^-"},
      {"pi2", {K::Pi2Complete, {}, 1, '+'}, false, "every t.0^n1 in [3]^+"},
      {"overlap", closed, std::nullopt, "negative control: all-a against all trees"},
  };
}

CorpusEntry corpus_entry(const std::string& name) {
  for (auto& e : corpus())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown corpus entry '" + name + "'");
}

AutomatonPair corpus_pair(const CorpusEntry& entry) {
  if (entry.name == "overlap") return overlapping_pair();
  return build(entry.spec);
}

void emit_corpus_entry(const CorpusEntry& entry, const std::string& dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto pair = corpus_pair(entry);
  const auto v = validate_pair(pair, seed);
  const auto pos = to_text(pair.positive), neg = to_text(pair.negative);
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file);
    out << text;
  };
  write(entry.name + ".pos.aut", pos);
  write(entry.name + ".neg.aut", neg);
  nlohmann::json m;
  m["name"] = entry.name;
  m["description"] = entry.description;
  m["positive"] = entry.name + ".pos.aut";
  m["negative"] = entry.name + ".neg.aut";
  m["positive_digest"] = digest_hex(pos);
  m["negative_digest"] = digest_hex(neg);
  m["states"] = {pair.positive.state_count(), pair.negative.state_count()};
  m["soundness"] = to_string(v.soundness);
  m["disjoint"] = v.disjoint;
  if (entry.in_delta02)
    m["expected_verdict"] = *entry.in_delta02 ? "InDelta02" : "NotInDelta02";
  else
    m["expected_verdict"] = nullptr;
  write(entry.name + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace wadge
