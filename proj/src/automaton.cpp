#include "wadge/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "wadge/errors.hpp"
#include "wadge/scc.hpp"

namespace wadge {

namespace {

template <class T>
void insert_sorted(std::vector<T>& v, const T& x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

}  // namespace

ParityTreeAutomaton::ParityTreeAutomaton(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {
  if (!alphabet_) throw std::invalid_argument("automaton without alphabet");
}

StateId ParityTreeAutomaton::add_state(std::string name, unsigned priority, bool initial) {
  const auto q = static_cast<StateId>(names_.size());
  names_.push_back(std::move(name));
  priorities_.push_back(priority);
  initial_.push_back(initial);
  moves_.resize(moves_.size() + alphabet_->size());
  return q;
}

void ParityTreeAutomaton::set_initial(StateId q, bool initial) { initial_.at(q) = initial; }

void ParityTreeAutomaton::check(StateId q, Symbol a) const {
  if (q >= names_.size()) throw std::out_of_range("state out of range");
  if (a < 0 || static_cast<std::size_t>(a) >= alphabet_->size()) throw std::out_of_range("symbol out of range");
}

void ParityTreeAutomaton::add_leaf(StateId q, Symbol a) {
  check(q, a);
  moves_[index(q, a)].leaf = true;
}

void ParityTreeAutomaton::add_left(StateId q, Symbol a, StateId child) {
  check(q, a);
  check(child, a);
  insert_sorted(moves_[index(q, a)].left_only, child);
}

void ParityTreeAutomaton::add_right(StateId q, Symbol a, StateId child) {
  check(q, a);
  check(child, a);
  insert_sorted(moves_[index(q, a)].right_only, child);
}

void ParityTreeAutomaton::add_binary(StateId q, Symbol a, StateId left, StateId right) {
  check(q, a);
  check(left, a);
  check(right, a);
  insert_sorted(moves_[index(q, a)].binary, std::pair{left, right});
}

void ParityTreeAutomaton::add_shaped(StateId q, Symbol a, Shape shape, StateId left, StateId right) {
  switch (shape) {
    case Shape::Leaf: add_leaf(q, a); break;
    case Shape::LeftOnly: add_left(q, a, left); break;
    case Shape::RightOnly: add_right(q, a, right); break;
    case Shape::Binary: add_binary(q, a, left, right); break;
  }
}

std::vector<StateId> ParityTreeAutomaton::initial_states() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < initial_.size(); ++q)
    if (initial_[q]) out.push_back(q);
  return out;
}

unsigned ParityTreeAutomaton::max_priority() const {
  unsigned m = 0;
  for (auto p : priorities_) m = std::max(m, p);
  return m;
}

std::size_t ParityTreeAutomaton::transition_count() const {
  std::size_t c = 0;
  for (const auto& m : moves_) c += (m.leaf ? 1 : 0) + m.left_only.size() + m.right_only.size() + m.binary.size();
  return c;
}

std::optional<StateId> ParityTreeAutomaton::find_state(std::string_view name) const {
  for (StateId q = 0; q < names_.size(); ++q)
    if (names_[q] == name) return q;
  return std::nullopt;
}

// ---------------------------------------------------------------- text format

std::string to_text(const ParityTreeAutomaton& a) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& s : a.alphabet()->symbols()) out << ' ' << s;
  out << '\n';
  for (StateId q = 0; q < a.state_count(); ++q) {
    out << "state " << a.name(q) << " priority " << a.priority(q);
    if (a.is_initial(q)) out << " init";
    out << '\n';
  }
  for (StateId q = 0; q < a.state_count(); ++q) {
    for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
      const Moves& m = a.moves(q, s);
      const std::string head = a.name(q) + " " + a.alphabet()->name(s) + " -> ";
      if (m.leaf) out << head << "leaf\n";
      for (auto c : m.left_only) out << head << '(' << a.name(c) << ",-)\n";
      for (auto c : m.right_only) out << head << "(-," << a.name(c) << ")\n";
      for (auto [l, r] : m.binary) out << head << '(' << a.name(l) << ',' << a.name(r) << ")\n";
    }
  }
  return out.str();
}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size() && line[i] != '#') {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return out;
}

bool valid_state_name(const std::string& s) {
  if (s.empty() || s == "-" || s == "leaf") return false;
  return s.find_first_of("(),") == std::string::npos;
}

}  // namespace

ParityTreeAutomaton parse_automaton(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<Token>>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto tok = tokenize(line);
      if (!tok.empty()) lines.emplace_back(no, std::move(tok));
    }
  }
  if (lines.empty() || lines[0].second[0].text != "alphabet:")
    throw ParseError(lines.empty() ? 1 : lines[0].first, 1, "document must start with 'alphabet:'");
  std::vector<std::string> symbols;
  for (std::size_t i = 1; i < lines[0].second.size(); ++i) symbols.push_back(lines[0].second[i].text);
  AlphabetPtr alphabet;
  try {
    alphabet = make_alphabet(symbols);
  } catch (const std::invalid_argument& e) {
    throw ParseError(lines[0].first, 1, e.what());
  }
  ParityTreeAutomaton aut(alphabet);

  // Pass 1: state declarations.
  std::unordered_map<std::string, StateId> states;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [no, tok] = lines[li];
    if (tok[0].text != "state") continue;
    if (tok.size() < 2) throw ParseError(no, tok[0].column, "expected state name");
    const std::string& name = tok[1].text;
    if (!valid_state_name(name)) throw ParseError(no, tok[1].column, "invalid state name '" + name + "'");
    if (tok.size() < 4 || tok[2].text != "priority")
      throw ParseError(no, tok[1].column + name.size(), "missing priority for state '" + name + "'");
    unsigned prio = 0;
    try {
      std::size_t used = 0;
      const long v = std::stol(tok[3].text, &used);
      if (used != tok[3].text.size() || v < 0) throw std::invalid_argument("");
      prio = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw ParseError(no, tok[3].column, "priority must be a natural number");
    }
    bool init = false;
    if (tok.size() == 5) {
      if (tok[4].text != "init") throw ParseError(no, tok[4].column, "expected 'init'");
      init = true;
    } else if (tok.size() > 5) {
      throw ParseError(no, tok[5].column, "unexpected token");
    }
    if (states.count(name)) throw ParseError(no, tok[1].column, "duplicate state '" + name + "'");
    states[name] = aut.add_state(name, prio, init);
  }

  // Pass 2: transitions.
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [no, tok] = lines[li];
    if (tok[0].text == "state") continue;
    if (tok[0].text == "alphabet:") throw ParseError(no, tok[0].column, "duplicate alphabet line");
    if (tok.size() < 4 || tok[2].text != "->") throw ParseError(no, tok[0].column, "expected '<state> <symbol> -> ...'");
    auto qit = states.find(tok[0].text);
    if (qit == states.end()) throw ParseError(no, tok[0].column, "undeclared state '" + tok[0].text + "'");
    auto sym = alphabet->find(tok[1].text);
    if (!sym) throw ParseError(no, tok[1].column, "undeclared symbol '" + tok[1].text + "'");
    std::string rhs;
    for (std::size_t i = 3; i < tok.size(); ++i) rhs += tok[i].text;
    const std::size_t col = tok[3].column;
    if (rhs == "leaf") {
      aut.add_leaf(qit->second, *sym);
      continue;
    }
    if (rhs.size() < 5 || rhs.front() != '(' || rhs.back() != ')' ||
        std::count(rhs.begin(), rhs.end(), ',') != 1)
      throw ParseError(no, col, "expected 'leaf' or '(left,right)'");
    const auto comma = rhs.find(',');
    const std::string l = rhs.substr(1, comma - 1), r = rhs.substr(comma + 1, rhs.size() - comma - 2);
    auto lookup = [&](const std::string& n) -> std::optional<StateId> {
      if (n == "-") return std::nullopt;
      auto it = states.find(n);
      if (it == states.end()) throw ParseError(no, col, "undeclared state '" + n + "'");
      return it->second;
    };
    const auto lq = lookup(l), rq = lookup(r);
    if (lq && rq)
      aut.add_binary(qit->second, *sym, *lq, *rq);
    else if (lq)
      aut.add_left(qit->second, *sym, *lq);
    else if (rq)
      aut.add_right(qit->second, *sym, *rq);
    else
      throw ParseError(no, col, "'(-,-)' is not a transition; use 'leaf'");
  }
  return aut;
}

// ---------------------------------------------------------------- constructions

ParityTreeAutomaton universal_automaton(AlphabetPtr alphabet) {
  ParityTreeAutomaton a(alphabet);
  const StateId u = a.add_state("all", 0, true);
  for (Symbol s = 0; s < static_cast<Symbol>(alphabet->size()); ++s) {
    a.add_leaf(u, s);
    a.add_left(u, s, u);
    a.add_right(u, s, u);
    a.add_binary(u, s, u, u);
  }
  return a;
}

ParityTreeAutomaton empty_automaton(AlphabetPtr alphabet) {
  ParityTreeAutomaton a(std::move(alphabet));
  a.add_state("none", 1, false);
  return a;
}


// Copies every state of `src` into `dst` with a name prefix; returns offset.
StateId copy_into(ParityTreeAutomaton& dst, const ParityTreeAutomaton& src, const std::string& prefix,
                  bool keep_initial) {
  const auto offset = static_cast<StateId>(dst.state_count());
  std::vector<Symbol> symbol_map(src.alphabet()->size());
  for (Symbol s = 0; s < static_cast<Symbol>(src.alphabet()->size()); ++s)
    symbol_map[s] = dst.alphabet()->at(src.alphabet()->name(s));
  for (StateId q = 0; q < src.state_count(); ++q)
    dst.add_state(prefix + src.name(q), src.priority(q), keep_initial && src.is_initial(q));
  for (StateId q = 0; q < src.state_count(); ++q) {
    for (Symbol s = 0; s < static_cast<Symbol>(src.alphabet()->size()); ++s) {
      const Moves& m = src.moves(q, s);
      const Symbol t = symbol_map[s];
      if (m.leaf) dst.add_leaf(q + offset, t);
      for (auto c : m.left_only) dst.add_left(q + offset, t, c + offset);
      for (auto c : m.right_only) dst.add_right(q + offset, t, c + offset);
      for (auto [l, r] : m.binary) dst.add_binary(q + offset, t, l + offset, r + offset);
    }
  }
  return offset;
}


ParityTreeAutomaton disjoint_union(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b) {
  if (!same_alphabet(a.alphabet(), b.alphabet())) throw AlphabetMismatch("union of automata over different alphabets");
  ParityTreeAutomaton out(a.alphabet());
  copy_into(out, a, "l.", true);
  copy_into(out, b, "r.", true);
  return out;
}

ParityTreeAutomaton widen_alphabet(const ParityTreeAutomaton& a, AlphabetPtr wider) {
  for (const auto& s : a.alphabet()->symbols())
    if (!wider->find(s)) throw AlphabetMismatch("widened alphabet lacks symbol '" + s + "'");
  ParityTreeAutomaton out(std::move(wider));
  copy_into(out, a, "", true);
  return out;
}

ParityTreeAutomaton with_initial(const ParityTreeAutomaton& a, const std::vector<StateId>& initial) {
  ParityTreeAutomaton out = a;
  for (StateId q = 0; q < out.state_count(); ++q) out.set_initial(q, false);
  for (auto q : initial) out.set_initial(q, true);
  return out;
}

namespace {

void successors(const ParityTreeAutomaton& a, StateId q, std::vector<std::uint32_t>& out) {
  for (Symbol s = 0; s < static_cast<Symbol>(a.alphabet()->size()); ++s) {
    const Moves& m = a.moves(q, s);
    for (auto c : m.left_only) out.push_back(c);
    for (auto c : m.right_only) out.push_back(c);
    for (auto [l, r] : m.binary) {
      out.push_back(l);
      out.push_back(r);
    }
  }
}

}  // namespace

bool is_weak(const ParityTreeAutomaton& a) {
  const auto scc = tarjan_scc(a.state_count(), [&](std::uint32_t q, std::vector<std::uint32_t>& out) {
    successors(a, q, out);
  });
  std::vector<int> parity(scc.count, -1);
  std::vector<std::uint32_t> succ;
  for (StateId q = 0; q < a.state_count(); ++q) {
    // Only states on a cycle matter.
    succ.clear();
    successors(a, q, succ);
    bool on_cycle = false;
    for (auto c : succ) on_cycle = on_cycle || scc.component[c] == scc.component[q];
    if (!on_cycle) continue;
    const int p = static_cast<int>(a.priority(q) % 2);
    int& slot = parity[scc.component[q]];
    if (slot == -1)
      slot = p;
    else if (slot != p)
      return false;
  }
  return true;
}

namespace {

// Deterministic parity monitor for "min-parity on track A and min-parity on
// track B". For every A-level l it remembers the least B priority seen since
// the last A priority <= l; on reading A priority p it emits a priority
// ordered lexicographically by (p, remembered B minimum).
class ConjunctionMonitor {
public:
  ConjunctionMonitor(unsigned max_a, unsigned max_b) : levels_(max_a + 1), width_(max_b + 1) {}

  using State = std::vector<std::uint8_t>;
  static constexpr std::uint8_t kNone = 0xff;

  State initial() const { return State(levels_, kNone); }

  /// Returns (emitted priority, successor state).
  std::pair<unsigned, State> step(const State& m, unsigned pa, unsigned pb) const {
    State next = m;
    for (auto& v : next) v = std::min<std::uint8_t>(v, static_cast<std::uint8_t>(pb));
    const unsigned low_b = next[pa];
    const unsigned bad = (pa % 2 == 1 || low_b % 2 == 1) ? 1 : 0;
    const unsigned out = 2 * (pa * width_ + low_b) + bad;
    for (unsigned l = pa; l < levels_; ++l) next[l] = kNone;
    return {out, next};
  }

private:
  unsigned levels_;
  unsigned width_;
};

struct MonitorStateHash {
  std::size_t operator()(const std::tuple<StateId, StateId, std::uint32_t>& k) const {
    return (std::get<0>(k) * 0x9e3779b1u) ^ (std::get<1>(k) * 0x85ebca6bu) ^ (std::get<2>(k) * 0xc2b2ae35u);
  }
};

}  // namespace

ParityTreeAutomaton product(const ParityTreeAutomaton& a, const ParityTreeAutomaton& b) {
  if (!same_alphabet(a.alphabet(), b.alphabet()))
    throw AlphabetMismatch("product of automata over different alphabets");
  const bool weak = is_weak(a) && is_weak(b);
  const auto& alphabet = a.alphabet();
  ParityTreeAutomaton out(alphabet);

  ConjunctionMonitor monitor(a.max_priority(), b.max_priority());
  std::map<ConjunctionMonitor::State, std::uint32_t> monitor_ids;
  std::vector<ConjunctionMonitor::State> monitor_states;
  auto monitor_id = [&](const ConjunctionMonitor::State& s) {
    auto [it, fresh] = monitor_ids.emplace(s, static_cast<std::uint32_t>(monitor_states.size()));
    if (fresh) monitor_states.push_back(s);
    return it->second;
  };

  using Key = std::tuple<StateId, StateId, std::uint32_t>;
  std::unordered_map<Key, StateId, MonitorStateHash> ids;
  std::vector<Key> keys;
  std::vector<std::uint32_t> next_monitor;  // per product state
  std::deque<StateId> work;
  auto get = [&](StateId qa, StateId qb, std::uint32_t m, bool initial) {
    const Key k{qa, qb, m};
    auto it = ids.find(k);
    if (it != ids.end()) {
      if (initial) out.set_initial(it->second, true);
      return it->second;
    }
    unsigned prio;
    std::uint32_t succ_m = 0;
    if (weak) {
      prio = (a.priority(qa) % 2 == 1 || b.priority(qb) % 2 == 1) ? 1 : 0;
    } else {
      auto [p, nm] = monitor.step(monitor_states[m], a.priority(qa), b.priority(qb));
      prio = p;
      succ_m = monitor_id(nm);
    }
    std::string name = a.name(qa) + "|" + b.name(qb);
    if (!weak) name += "|m" + std::to_string(m);
    const StateId q = out.add_state(std::move(name), prio, initial);
    ids.emplace(k, q);
    keys.push_back(k);
    next_monitor.push_back(succ_m);
    work.push_back(q);
    return q;
  };

  const std::uint32_t m0 = weak ? 0 : monitor_id(monitor.initial());
  for (auto qa : a.initial_states())
    for (auto qb : b.initial_states()) get(qa, qb, m0, true);

  while (!work.empty()) {
    const StateId q = work.front();
    work.pop_front();
    const auto [qa, qb, m] = keys[q];
    const std::uint32_t nm = next_monitor[q];
    for (Symbol s = 0; s < static_cast<Symbol>(alphabet->size()); ++s) {
      const Moves& ma = a.moves(qa, s);
      const Moves& mb = b.moves(qb, s);
      if (ma.leaf && mb.leaf) out.add_leaf(q, s);
      for (auto ca : ma.left_only)
        for (auto cb : mb.left_only) out.add_left(q, s, get(ca, cb, nm, false));
      for (auto ca : ma.right_only)
        for (auto cb : mb.right_only) out.add_right(q, s, get(ca, cb, nm, false));
      for (auto [la, ra] : ma.binary)
        for (auto [lb, rb] : mb.binary) {
          const StateId l = get(la, lb, nm, false);
          const StateId r = get(ra, rb, nm, false);
          out.add_binary(q, s, l, r);
        }
    }
  }
  if (out.state_count() == 0) return empty_automaton(alphabet);
  return out;
}

}  // namespace wadge
