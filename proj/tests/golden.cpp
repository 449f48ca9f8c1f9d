#include "golden.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "wadge/acceptance.hpp"
#include "wadge/canonical.hpp"

namespace golden {

using namespace wadge;

namespace {

class TermParser {
public:
  TermParser(const std::string& s, AlphabetPtr ab) : s_(s), ab_(std::move(ab)) {}

  RegularTree parse() {
    const NodeId root = term();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return RegularTree(ab_, nodes_, root);
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("term '" + s_ + "' at " + std::to_string(i_) + ": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  std::string word() {
    skip();
    const auto start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '@')) ++i_;
    if (start == i_) fail("expected a name");
    return s_.substr(start, i_ - start);
  }

  NodeId term() {
    skip();
    if (i_ < s_.size() && s_[i_] == '$') {
      ++i_;
      const auto name = word();
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
        if (it->first == name) return it->second;
      fail("unbound $" + name);
    }
    std::string w = word();
    std::optional<std::string> binding;
    if (std::isupper(static_cast<unsigned char>(w[0]))) {
      binding = w;
      expect('=');
      w = word();
    }
    const auto sym = ab_->find(w);
    if (!sym) fail("unknown label " + w);
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(TreeNode{*sym, std::nullopt, std::nullopt});
    if (binding) scope_.emplace_back(*binding, id);
    skip();
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      const auto l = slot();
      expect(',');
      const auto r = slot();
      expect(')');
      nodes_[id].left = l;
      nodes_[id].right = r;
    }
    if (binding) scope_.pop_back();
    return id;
  }

  std::optional<NodeId> slot() {
    skip();
    if (i_ < s_.size() && s_[i_] == '-') {
      ++i_;
      return std::nullopt;
    }
    return term();
  }

  std::string s_;
  std::size_t i_ = 0;
  AlphabetPtr ab_;
  std::vector<TreeNode> nodes_;
  std::vector<std::pair<std::string, NodeId>> scope_;
};

// ---------------------------------------------------------------- formulas

const std::string& label(const RegularTree& t, NodeId n) { return t.alphabet()->name(t.node(n).label); }
std::optional<NodeId> left(const RegularTree& t, NodeId n) { return t.node(n).left; }
std::optional<NodeId> right(const RegularTree& t, NodeId n) { return t.node(n).right; }

template <class F>
bool every_reachable(const RegularTree& t, NodeId n, F pred) {
  std::set<NodeId> seen{n};
  std::vector<NodeId> todo{n};
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    if (!pred(v)) return false;
    for (auto c : {left(t, v), right(t, v)})
      if (c && seen.insert(*c).second) todo.push_back(*c);
  }
  return true;
}

bool all_a(const RegularTree& t, NodeId n) {
  return every_reachable(t, n, [&](NodeId v) { return label(t, v) == "a"; });
}

bool no_b(const RegularTree& t, NodeId n) {
  return every_reachable(t, n, [&](NodeId v) { return label(t, v) != "b"; });
}

// The unfolding below n is finite: no cycle is reachable.
bool finite(const RegularTree& t, NodeId n) {
  std::vector<int> mark(t.size(), 0);  // 0 new, 1 on stack, 2 done
  std::function<bool(NodeId)> dfs = [&](NodeId v) {
    mark[v] = 1;
    for (auto c : {left(t, v), right(t, v)}) {
      if (!c) continue;
      if (mark[*c] == 1) return false;
      if (mark[*c] == 0 && !dfs(*c)) return false;
    }
    mark[v] = 2;
    return true;
  };
  return dfs(n);
}

// t.0 in L and @a along all of 10*, or the first non-@a node 10^n has
// t.10^n0 in M.
Lang arrow_f(Lang l, Lang m) {
  return [l, m](const RegularTree& t, NodeId n) {
    const auto r = right(t, n);
    if (!r) return false;
    bool all_arrow = true;
    std::set<NodeId> seen;
    std::optional<NodeId> x = r;
    while (true) {
      if (!x) {
        all_arrow = false;
        break;
      }
      if (!seen.insert(*x).second) break;
      if (label(t, *x) != "@a") {
        const auto c = left(t, *x);
        if (c && m(t, *c)) return true;
        all_arrow = false;
        break;
      }
      x = left(t, *x);
    }
    const auto l0 = left(t, n);
    return all_arrow && l0 && l(t, *l0);
  };
}

Lang plus_minus_f(Lang m) {
  return [m](const RegularTree& t, NodeId n) {
    const auto c = left(t, n);
    if (!c) return false;
    if (label(t, n) == "@l") return m(t, *c);
    if (label(t, n) == "@r") return !m(t, *c);
    return false;
  };
}

Lang sum_f(Lang m, Lang l) { return arrow_f(std::move(l), plus_minus_f(std::move(m))); }

// The first @b on 0* is at 0^k and t.0^k1 is in L_{k mod n}.
Lang sup_minus_f(std::vector<Lang> ls) {
  return [ls](const RegularTree& t, NodeId n) {
    std::set<std::pair<NodeId, std::size_t>> seen;
    std::optional<NodeId> x = n;
    std::size_t k = 0;
    while (x && seen.insert({*x, k % ls.size()}).second) {
      if (label(t, *x) == "@b") {
        const auto c = right(t, *x);
        return c.has_value() && ls[k % ls.size()](t, *c);
      }
      x = left(t, *x);
      ++k;
    }
    return false;
  };
}

bool no_sup_on_right_branch(const RegularTree& t, NodeId n) {
  std::set<NodeId> seen;
  std::optional<NodeId> x = n;
  while (x && seen.insert(*x).second) {
    if (label(t, *x) == "@b") return false;
    x = right(t, *x);
  }
  return true;
}

Lang sup_plus_f(std::vector<Lang> ls) {
  auto base = sup_minus_f(std::move(ls));
  return [base](const RegularTree& t, NodeId n) { return base(t, n) || no_sup_on_right_branch(t, n); };
}

Lang bullet_f(Lang l, unsigned alpha) {
  if (alpha == kOmega) return sup_plus_f({bullet_f(l, 1), bullet_f(l, 2)});
  if (alpha == 1) return l;
  return sum_f(bullet_f(l, alpha - 1), l);
}

// Some 0^n is a leaf, t(0^k) = a for k <= n, and each t.0^k1 with k >= 1 is
// finite or free of b.
bool omega_example_f(const RegularTree& t, NodeId n) {
  std::set<NodeId> seen;
  NodeId x = n;
  for (unsigned k = 0;; ++k) {
    if (!seen.insert(x).second) return false;
    if (label(t, x) != "a") return false;
    const auto r = right(t, x);
    if (k >= 1 && r && !finite(t, *r) && !no_b(t, *r)) return false;
    const auto l = left(t, x);
    if (!l) return !r;
    x = *l;
  }
}

const Lang kClosed = [](const RegularTree& t, NodeId n) { return all_a(t, n); };
const Lang kOpen = [](const RegularTree& t, NodeId n) { return !all_a(t, n); };

// Some t.0^n1 is outside [3]^+.
Lang sigma2_f() {
  const Lang three = bullet_f(kClosed, 3);
  return [three](const RegularTree& t, NodeId n) {
    std::set<NodeId> seen;
    std::optional<NodeId> x = n;
    while (x && seen.insert(*x).second) {
      if (const auto r = right(t, *x); r && !three(t, *r)) return true;
      x = left(t, *x);
    }
    return false;
  };
}

// Every present t.0^n1 is in [3]^+.
Lang pi2_f() {
  const Lang three = bullet_f(kClosed, 3);
  return [three](const RegularTree& t, NodeId n) {
    std::set<NodeId> seen;
    std::optional<NodeId> x = n;
    while (x && seen.insert(*x).second) {
      if (const auto r = right(t, *x); r && !three(t, *r)) return false;
      x = left(t, *x);
    }
    return true;
  };
}

// ---------------------------------------------------------------- trees

const std::string kFullA = "F=a($F,$F)";
const std::string kInfB = "G=a($G,b)";

std::vector<std::string> arrow_trees() {
  const std::vector<std::string> lefts{kFullA, "b", "-"};
  const std::vector<std::string> roots{"a", "b", "@a"};
  const std::vector<std::string> rights{"S=@a($S,-)",
                                        "S=@a($S,b)",
                                        "@a(@a(b(a,-),-),-)",
                                        "@a(b(b,-),-)",
                                        "b(" + kFullA + ",-)",
                                        "b",
                                        "@a(-,a)",
                                        "a(@a,a)",
                                        "@a(@a(@a(a(" + kInfB + ",-),-),-),-)",
                                        "@a",
                                        "-"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lefts.size(); ++i)
    for (const auto& r : rights) out.push_back(roots[i] + "(" + lefts[i] + "," + r + ")");
  return out;
}

std::vector<std::string> plus_minus_trees() {
  std::vector<std::string> out;
  for (std::string tag : {"@l", "@r", "a", "@b"})
    for (const auto& kid : {std::string("a"), kFullA, std::string("b"), kInfB})
      for (std::string r : {"-", "b"}) out.push_back(tag + "(" + kid + "," + r + ")");
  out.push_back("@l");
  out.push_back("@r(-,a)");
  return out;
}

// Trees of the sum [1]^+ + [1]^+, which is also [2]^+.
std::vector<std::string> sum_trees() {
  const std::vector<std::string> rights{"S=@a($S,-)",
                                        "b(@l(a,-),-)",
                                        "b(@r(a,-),-)",
                                        "@a(a(@r(b,-),a),-)",
                                        "@a(@a(@l(b,-),-),-)",
                                        "a(@l(" + kFullA + ",b),-)",
                                        "a(a,-)",
                                        "@a",
                                        "b(@l,-)",
                                        "@a(@a(a(@r(" + kInfB + ",-),-),-),-)",
                                        "@r(@r(a(a,a),-),-)",
                                        "@l(@l(b,-),-)",
                                        "@b(@l(a(a,a),-),b)",
                                        "S=@a($S,@l(a,-))",
                                        "-"};
  std::vector<std::string> out;
  for (const auto& l : {kFullA, std::string("b")})
    for (const auto& r : rights) out.push_back("a(" + l + "," + r + ")");
  out.push_back("a(-,b(@l(a,-),-))");
  out.push_back("@r(-,S=@a($S,-))");
  return out;
}

std::vector<std::string> sup_trees() {
  return {"@b(-,a)",
          "@b(-,b)",
          "a(@b(-,b),-)",
          "a(@b(-,a),-)",
          "a(a(@b(-," + kFullA + "),-),-)",
          "S=a($S,-)",
          "a",
          "@b",
          "a(-,@b)",
          "b(@b(a,b),@b)",
          "@b(@b,a)",
          "a(@b(-," + kInfB + "),-)",
          "a(@b(-," + kFullA + "),-)",
          "a(a(@b(-,b),-),R=a(-,$R))",
          "a(a(@b(-,b),-),a(-,@b))",
          "S=b($S,b)",
          "S=b($S,@b)",
          "a(a(a(@b(-,b),-),-),-)",
          "a(a(a(@b(-,a(a,a)),-),-),-)",
          "@l(@b(-,@l),-)",
          "@b(-,@b)",
          "a(@a(@b(-,a),-),-)",
          "S=a(@b(-,a),$S)",
          "a(@b(b,a(b,-)),-)",
          "@a(@a(@a(@a(@b(-," + kFullA + "),-),-),-),-)",
          "@a(@a(@a(@a(@b(-,b),-),-),-),-)",
          "a(-,a(-,a(-,@b)))",
          "a(-,a(-,a(-,b)))",
          "S=a($S,a)",
          "a(S=@b($S,a),-)",
          "@b(-,F=a(-,$F))"};
}

const std::string kTwoIn = "a(b,b(@l(a,-),-))";
const std::string kTwoOut = "a(b,b(@r(a,-),-))";
const std::string kTwoIn2 = "a(" + kFullA + ",S=@a($S,-))";
const std::string kThreeIn = "a(" + kFullA + ",b(@l(" + kTwoIn + ",-),-))";
const std::string kThreeOut = "a(b,b(@l(" + kTwoOut + ",-),-))";

std::vector<std::string> bullet3_trees() {
  const std::vector<std::string> rights{"S=@a($S,-)",
                                        "b(@l(" + kTwoIn + ",-),-)",
                                        "b(@l(" + kTwoOut + ",-),-)",
                                        "b(@r(" + kTwoOut + ",-),-)",
                                        "b(@r(" + kTwoIn2 + ",-),-)",
                                        "@a(a(@l(" + kTwoIn2 + ",b),-),-)",
                                        "@a(@a(@r(" + kTwoIn + ",-),-),-)",
                                        "a(@l,-)",
                                        "a(" + kTwoIn + ",-)",
                                        "@a(-,b)",
                                        "-",
                                        "@a(@a(@a(b(@r(a,-),-),-),-),-)",
                                        "@a(b(@l(a(a,S=@a($S,-)),-),-),-)",
                                        "b(@l(a(a,b(@r(" + kFullA + ",-),-)),-),-)",
                                        "b(@r(a(a,b(@r(" + kFullA + ",-),-)),-),-)"};
  std::vector<std::string> out;
  for (const auto& l : {kFullA, std::string("b")})
    for (const auto& r : rights) out.push_back("a(" + l + "," + r + ")");
  return out;
}

std::vector<std::string> bullet_omega_trees() {
  // Side trees in and out of L•1 and L•2, and two L•3 trees.
  const std::vector<std::pair<std::string, std::string>> sides{{kFullA, "b"}, {kTwoIn, kTwoOut}};
  std::vector<std::string> out;
  out.push_back("@b(-," + sides[0].first + ")");
  out.push_back("@b(-," + sides[0].second + ")");
  for (unsigned k = 1; k <= 6; ++k)
    for (const auto& side : {sides[k % 2].first, sides[k % 2].second})
      for (std::string root_right : {"-", "@b"}) {
        std::string spine = "@b(-," + side + ")";
        for (unsigned j = 1; j < k; ++j) spine = "a(" + spine + ",-)";
        out.push_back("a(" + spine + "," + root_right + ")");
      }
  out.push_back("a(@b(-," + kThreeIn + "),-)");
  out.push_back("a(@b(-," + kThreeOut + "),@b)");
  out.push_back("S=a($S,-)");
  out.push_back("S=a($S,@b)");
  out.push_back("R=a(-,$R)");
  out.push_back("a(-,a(-,@b))");
  out.push_back("@b");
  return out;
}

std::vector<std::string> omega_example_trees() {
  return {"a",
          "a(a,-)",
          "a(a(a,-),-)",
          "S=a($S,-)",
          "b",
          "a(b,-)",
          "a(a(a,b),-)",
          "a(a(a,G=b($G,$G)),-)",
          "a(a(a," + kFullA + "),-)",
          "a(a(a," + kInfB + "),-)",
          "a(a,G=b($G,$G))",
          "a(-,a)",
          "a(a(-,a),-)",
          "a(a(a(a,b(b,b)),a),b)",
          "a(a(a(a," + kInfB + "),a),b)",
          "a(@a,-)",
          "a(a(a(a(a,-),-),-),-)",
          "a(a(a(a(a,S=b($S,-)),-),-),-)",
          "a(a(a(a(a,S=a($S,-)),-),-),-)",
          "a(a(b,-),-)",
          "a(S=a($S,b),-)",
          "a(a(a,@b(@b,-)),-)",
          "a(a(a,F=@b($F,$F)),-)",
          "a(a(a,F=a($F,@b)),a)",
          "a(a(a,a(b," + kFullA + ")),-)",
          "a(a(a,a(b,a(a,a))),-)",
          "@a",
          "a(a(a,-)," + kInfB + ")",
          "a(a(a(-,b),-),-)",
          "a(a(a(a,-),b(-,F=b($F,$F))),-)"};
}

std::vector<std::string> spine_trees() {
  const std::vector<std::string> sides{kThreeIn, kThreeOut, "b", kFullA, "-"};
  std::vector<std::string> out;
  for (const auto& s : sides) out.push_back("a(-," + s + ")");
  for (const auto& s1 : {kThreeIn, kThreeOut, std::string("-")})
    for (const auto& s2 : {kThreeIn, kThreeOut, std::string("-")}) out.push_back("a(a(-," + s2 + ")," + s1 + ")");
  for (const auto& s : sides) out.push_back("S=a($S," + s + ")");
  out.push_back("a");
  out.push_back("S=a($S,-)");
  out.push_back("a(a(a(-,b),-),-)");
  out.push_back("b(a,-)");
  out.push_back("a(a(a(a," + kThreeIn + ")," + kThreeIn + ")," + kThreeIn + ")");
  out.push_back("a(a(a(a," + kThreeOut + ")," + kThreeIn + ")," + kThreeIn + ")");
  out.push_back("a(S=a($S," + kThreeIn + ")," + kThreeOut + ")");
  out.push_back("S=b(a($S," + kThreeIn + ")," + kThreeIn + ")");
  out.push_back("S=b(a($S,a)," + kThreeIn + ")");
  out.push_back("a(" + kThreeIn + "," + kThreeIn + ")");
  out.push_back("@b(@b(-," + kThreeIn + ")," + kThreeIn + ")");
  return out;
}

}  // namespace

RegularTree parse_term(const std::string& term, const AlphabetPtr& alphabet) {
  return TermParser(term, alphabet).parse();
}

std::vector<Family> families() {
  const auto closed = base_closed(), open = base_open();
  std::vector<Family> out;
  out.push_back({"arrow",
                 arrow(closed, open),
                 arrow_f(kClosed, kOpen),
                 arrow_trees(),
                 {{"a(a,S=@a($S,-))", true}, {"a(b,@a(b(b,-),-))", true}, {"a(b,@a(b(a,-),-))", false}}});
  out.push_back({"plusMinus",
                 plus_minus(closed),
                 plus_minus_f(kClosed),
                 plus_minus_trees(),
                 {{"@l(a,-)", true}, {"@r(a,-)", false}, {"@r(b,b)", true}}});
  out.push_back({"sum",
                 sum(closed, closed),
                 sum_f(kClosed, kClosed),
                 sum_trees(),
                 {{"a(a,S=@a($S,-))", true}, {"a(b,b(@l(a,-),-))", true}, {"a(b,b(@r(a,-),-))", false}}});
  out.push_back({"supMinus",
                 sup_minus({closed, open}),
                 sup_minus_f({kClosed, kOpen}),
                 sup_trees(),
                 {{"a(@b(-,b),-)", true}, {"S=a($S,-)", false}, {"a(@b(-,a),-)", false}}});
  out.push_back({"supPlus",
                 sup_plus({closed, open}),
                 sup_plus_f({kClosed, kOpen}),
                 sup_trees(),
                 {{"a(@b(-,b),-)", true}, {"S=a($S,-)", true}, {"a(-,@b)", false}}});
  out.push_back({"bullet2", bullet(closed, 2), bullet_f(kClosed, 2), sum_trees(), {{kTwoIn, true}, {kTwoOut, false}}});
  out.push_back({"bullet3",
                 bullet(closed, 3),
                 bullet_f(kClosed, 3),
                 bullet3_trees(),
                 {{kThreeIn, true}, {kThreeOut, false}}});
  out.push_back({"bulletOmega",
                 bullet(closed, kOmega),
                 bullet_f(kClosed, kOmega),
                 bullet_omega_trees(),
                 {{"@b(-," + kFullA + ")", true}, {"a(@b(-," + kTwoOut + "),@b)", false}}});
  out.push_back({"omegaExample",
                 omega_example(),
                 omega_example_f,
                 omega_example_trees(),
                 {{"a(a(a,b),b)", true}, {"S=a($S,-)", false}}});
  out.push_back({"sigma2",
                 sigma2_complete(),
                 sigma2_f(),
                 spine_trees(),
                 {{"a(-,b)", true}, {"S=a($S," + kThreeIn + ")", false}}});
  out.push_back({"pi2",
                 pi2_complete(),
                 pi2_f(),
                 spine_trees(),
                 {{"a(-,b)", false}, {"S=a($S," + kThreeIn + ")", true}}});
  return out;
}

Outcome run(const Family& f) {
  Outcome o;
  const auto ab = f.pair.alphabet();
  auto check = [&](const std::string& term, std::optional<bool> expected) {
    const auto t = parse_term(term, ab);
    const bool want = f.oracle(t, RegularTree::root());
    const bool pos = accepts(f.pair.positive, t), neg = accepts(f.pair.negative, t);
    if (pos != want || neg == want) o.failures.push_back(term);
    if (expected && *expected != want) o.failures.push_back("anchor " + term);
    return want;
  };
  for (const auto& term : f.trees) {
    ++o.trees;
    (check(term, std::nullopt) ? o.accepted : o.rejected) += 1;
  }
  for (const auto& [term, expected] : f.anchors) check(term, expected);
  return o;
}

}  // namespace golden
