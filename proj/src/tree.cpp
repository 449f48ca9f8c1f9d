#include "wadge/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "wadge/errors.hpp"
#include "wadge/scc.hpp"

namespace wadge {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet must not be empty");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty() || s == kPortLabel || s == "-") throw std::invalid_argument("invalid symbol name '" + s + "'");
    if (!seen.insert(s).second) throw std::invalid_argument("duplicate symbol '" + s + "'");
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == name) return static_cast<Symbol>(i);
  return std::nullopt;
}

Symbol Alphabet::at(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw std::invalid_argument("unknown symbol '" + std::string(name) + "'");
}

AlphabetPtr make_alphabet(std::vector<std::string> symbols) {
  return std::make_shared<const Alphabet>(std::move(symbols));
}

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) { return a == b || (a && b && *a == *b); }

RegularTree::RegularTree(AlphabetPtr alphabet, std::vector<TreeNode> nodes, NodeId root,
                         std::vector<std::optional<NodeId>>* old_to_new)
    : alphabet_(std::move(alphabet)) {
  if (!alphabet_) throw TreeError("tree without alphabet");
  if (root >= nodes.size()) throw TreeError("root is not a node");
  std::vector<std::optional<NodeId>> remap(nodes.size());
  std::vector<NodeId> order;
  std::deque<NodeId> queue{root};
  remap[root] = 0;
  order.push_back(root);
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    const TreeNode& tn = nodes[n];
    if (tn.label != kPortSymbol && (tn.label < 0 || static_cast<std::size_t>(tn.label) >= alphabet_->size()))
      throw TreeError("label out of range");
    if (tn.is_port() && (tn.left || tn.right)) throw TreeError("a port must be a leaf");
    for (const auto& child : {tn.left, tn.right}) {
      if (!child) continue;
      if (*child >= nodes.size()) throw TreeError("child is not a node");
      if (!remap[*child]) {
        remap[*child] = static_cast<NodeId>(order.size());
        order.push_back(*child);
        queue.push_back(*child);
      }
    }
  }
  nodes_.reserve(order.size());
  for (NodeId old : order) {
    TreeNode tn = nodes[old];
    if (tn.left) tn.left = *remap[*tn.left];
    if (tn.right) tn.right = *remap[*tn.right];
    nodes_.push_back(tn);
  }
  if (old_to_new) *old_to_new = std::move(remap);
}

RegularTree RegularTree::single_leaf(AlphabetPtr alphabet, Symbol label) {
  return RegularTree(std::move(alphabet), {TreeNode{label, {}, {}}}, 0);
}

RegularTree RegularTree::single_port(AlphabetPtr alphabet) {
  return RegularTree(std::move(alphabet), {TreeNode{kPortSymbol, {}, {}}}, 0);
}

namespace {

SccDecomposition node_sccs(const std::vector<TreeNode>& nodes) {
  return tarjan_scc(nodes.size(), [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
    if (nodes[v].left) out.push_back(*nodes[v].left);
    if (nodes[v].right) out.push_back(*nodes[v].right);
  });
}

// Nodes lying on some cycle of the graph.
std::vector<bool> cyclic_nodes(const std::vector<TreeNode>& nodes) {
  const auto scc = node_sccs(nodes);
  std::vector<std::uint32_t> size(scc.count, 0);
  for (auto c : scc.component) ++size[c];
  std::vector<bool> out(nodes.size(), false);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const auto& n = nodes[v];
    out[v] = size[scc.component[v]] > 1 || (n.left && *n.left == v) || (n.right && *n.right == v);
  }
  return out;
}

// reaches[v]: the subtree at v contains a port.
std::vector<bool> reaches_port(const std::vector<TreeNode>& nodes) {
  std::vector<bool> r(nodes.size(), false);
  for (std::size_t v = 0; v < nodes.size(); ++v) r[v] = nodes[v].is_port();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (r[v]) continue;
      const auto& n = nodes[v];
      if ((n.left && r[*n.left]) || (n.right && r[*n.right])) r[v] = changed = true;
    }
  }
  return r;
}

}  // namespace

bool RegularTree::is_acyclic() const {
  const auto cyc = cyclic_nodes(nodes_);
  return std::none_of(cyc.begin(), cyc.end(), [](bool b) { return b; });
}

bool RegularTree::has_ports() const {
  return std::any_of(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_port(); });
}

unsigned RegularTree::unfolded_port_count() const {
  const auto reach = reaches_port(nodes_);
  const auto cyc = cyclic_nodes(nodes_);
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (reach[v] && cyc[v]) return 2;
  // Remaining relevant part is a DAG: count root-to-port paths, saturating.
  std::vector<int> memo(nodes_.size(), -1);
  auto count = [&](auto&& self, NodeId v) -> unsigned {
    if (memo[v] >= 0) return static_cast<unsigned>(memo[v]);
    unsigned c = nodes_[v].is_port() ? 1u : 0u;
    for (const auto& ch : {nodes_[v].left, nodes_[v].right})
      if (ch && reach[*ch]) c = std::min(2u, c + self(self, *ch));
    memo[v] = static_cast<int>(c);
    return c;
  };
  return count(count, root());
}

namespace {

// Unfolds an acyclic graph into a tree (no node shared by two parents).
RegularTree unfold_acyclic(const RegularTree& t) {
  std::vector<TreeNode> out;
  auto copy = [&](auto&& self, NodeId v) -> NodeId {
    const NodeId id = static_cast<NodeId>(out.size());
    out.push_back(TreeNode{t.node(v).label, {}, {}});
    if (auto l = t.node(v).left) {
      const NodeId c = self(self, *l);
      out[id].left = c;
    }
    if (auto r = t.node(v).right) {
      const NodeId c = self(self, *r);
      out[id].right = c;
    }
    return id;
  };
  copy(copy, RegularTree::root());
  return RegularTree(t.alphabet(), std::move(out), 0);
}

bool has_sharing(const RegularTree& t) {
  std::vector<int> indeg(t.size(), 0);
  for (const auto& n : t.nodes()) {
    if (n.left) ++indeg[*n.left];
    if (n.right) ++indeg[*n.right];
  }
  return std::any_of(indeg.begin(), indeg.end(), [](int d) { return d > 1; });
}

}  // namespace

Prefix::Prefix(RegularTree tree) : tree_(std::move(tree)) {
  if (!tree_.is_acyclic()) throw TreeError("a prefix must be finite");
  if (has_sharing(tree_)) tree_ = unfold_acyclic(tree_);
  for (NodeId v = 0; v < tree_.size(); ++v)
    if (tree_.node(v).is_port()) ports_.push_back(v);
}

Context::Context(RegularTree tree) : tree_(std::move(tree)) {
  if (tree_.unfolded_port_count() != 1) throw TreeError("a context must have exactly one port");
  const auto reach = reaches_port(tree_.nodes());
  NodeId v = RegularTree::root();
  spine_.push_back(v);
  while (!tree_.node(v).is_port()) {
    const auto& n = tree_.node(v);
    if (n.left && reach[*n.left]) {
      directions_.push_back(0);
      v = *n.left;
    } else {
      directions_.push_back(1);
      v = *n.right;
    }
    spine_.push_back(v);
  }
  port_ = v;
}

Context Context::identity(AlphabetPtr alphabet) { return Context(RegularTree::single_port(std::move(alphabet))); }

NodeId append_graph(std::vector<TreeNode>& nodes, const RegularTree& tree) {
  const NodeId offset = static_cast<NodeId>(nodes.size());
  for (TreeNode n : tree.nodes()) {
    if (n.left) *n.left += offset;
    if (n.right) *n.right += offset;
    nodes.push_back(n);
  }
  return offset + RegularTree::root();
}

namespace {

// Replaces port nodes by the roots given in `target`; returns the new root.
RegularTree substitute_ports(const RegularTree& host, const std::map<NodeId, RegularTree>& assignment) {
  std::vector<TreeNode> nodes = host.nodes();
  std::map<NodeId, NodeId> target;
  for (const auto& [port, t] : assignment) {
    if (!same_alphabet(t.alphabet(), host.alphabet())) throw AlphabetMismatch("plugged tree uses another alphabet");
    target[port] = append_graph(nodes, t);
  }
  auto redirect = [&](std::optional<NodeId>& child) {
    if (!child) return;
    auto it = target.find(*child);
    if (it != target.end()) child = it->second;
  };
  for (std::size_t i = 0; i < host.size(); ++i) {
    redirect(nodes[i].left);
    redirect(nodes[i].right);
  }
  NodeId root = RegularTree::root();
  if (auto it = target.find(root); it != target.end()) root = it->second;
  return RegularTree(host.alphabet(), std::move(nodes), root);
}

}  // namespace

RegularTree plug(const Prefix& prefix, const std::map<NodeId, RegularTree>& assignment) {
  for (NodeId p : prefix.ports())
    if (!assignment.count(p)) throw TreeError("assignment is not total on ports");
  for (const auto& [p, t] : assignment)
    if (!std::binary_search(prefix.ports().begin(), prefix.ports().end(), p))
      throw TreeError("assignment names a node that is not a port");
  return substitute_ports(prefix.tree(), assignment);
}

RegularTree plug(const Context& context, const RegularTree& tree) {
  return substitute_ports(context.tree(), {{context.port(), tree}});
}

Context compose(const Context& outer, const Context& inner) { return Context(plug(outer, inner.tree())); }

RegularTree subtree(const RegularTree& tree, NodeId node) {
  if (node >= tree.size()) throw TreeError("node not in tree");
  return RegularTree(tree.alphabet(), tree.nodes(), node);
}

std::optional<NodeId> node_at(const RegularTree& tree, std::string_view word) {
  NodeId v = RegularTree::root();
  for (char c : word) {
    const auto& n = tree.node(v);
    const auto& next = c == '0' ? n.left : c == '1' ? n.right : std::optional<NodeId>{};
    if (!next) return std::nullopt;
    v = *next;
  }
  return v;
}

RegularTree subtree_at(const RegularTree& tree, std::string_view word) {
  auto v = node_at(tree, word);
  if (!v) throw TreeError("node " + std::string(word) + " not in tree");
  return subtree(tree, *v);
}

LevelCut level_prefix(const RegularTree& tree, unsigned depth) {
  std::vector<TreeNode> nodes;
  std::map<NodeId, NodeId> origin;
  auto build = [&](auto&& self, NodeId v, unsigned d) -> NodeId {
    const NodeId id = static_cast<NodeId>(nodes.size());
    if (d == depth) {
      nodes.push_back(TreeNode{kPortSymbol, {}, {}});
      origin[id] = v;
      return id;
    }
    nodes.push_back(TreeNode{tree.node(v).label, {}, {}});
    if (auto l = tree.node(v).left) {
      const NodeId c = self(self, *l, d + 1);
      nodes[id].left = c;
    }
    if (auto r = tree.node(v).right) {
      const NodeId c = self(self, *r, d + 1);
      nodes[id].right = c;
    }
    return id;
  };
  build(build, RegularTree::root(), 0);
  std::vector<std::optional<NodeId>> remap;
  RegularTree t(tree.alphabet(), std::move(nodes), 0, &remap);
  std::map<NodeId, NodeId> renamed;
  for (const auto& [p, v] : origin) renamed[*remap[p]] = v;
  return LevelCut{Prefix(std::move(t)), std::move(renamed)};
}

RegularTree omega_power(const Context& context) {
  if (context.is_identity()) throw TreeError("the identity context has no infinite power");
  std::vector<TreeNode> nodes = context.tree().nodes();
  const NodeId parent = context.spine()[context.spine().size() - 2];
  if (context.directions().back() == 0)
    nodes[parent].left = RegularTree::root();
  else
    nodes[parent].right = RegularTree::root();
  return RegularTree(context.tree().alphabet(), std::move(nodes), RegularTree::root());
}

bool same_unfolding(const RegularTree& a, const RegularTree& b, std::optional<unsigned> max_depth) {
  std::set<std::pair<NodeId, NodeId>> seen;
  std::deque<std::tuple<NodeId, NodeId, unsigned>> queue{{RegularTree::root(), RegularTree::root(), 0}};
  seen.insert({RegularTree::root(), RegularTree::root()});
  while (!queue.empty()) {
    auto [x, y, d] = queue.front();
    queue.pop_front();
    if (max_depth && d >= *max_depth) continue;
    const auto& nx = a.node(x);
    const auto& ny = b.node(y);
    const bool port_x = nx.is_port(), port_y = ny.is_port();
    if (port_x != port_y) return false;
    if (!port_x && a.alphabet()->name(nx.label) != b.alphabet()->name(ny.label)) return false;
    if (nx.shape() != ny.shape()) return false;
    auto visit = [&](NodeId cx, NodeId cy) {
      if (seen.insert({cx, cy}).second) queue.emplace_back(cx, cy, d + 1);
    };
    if (nx.left) visit(*nx.left, *ny.left);
    if (nx.right) visit(*nx.right, *ny.right);
  }
  return true;
}

std::string to_text(const RegularTree& tree) {
  std::ostringstream out;
  out << "root 0\n";
  for (NodeId v = 0; v < tree.size(); ++v) {
    const auto& n = tree.node(v);
    out << "node " << v << " label " << (n.is_port() ? std::string(kPortLabel) : tree.alphabet()->name(n.label))
        << " left " << (n.left ? std::to_string(*n.left) : "-") << " right "
        << (n.right ? std::to_string(*n.right) : "-") << "\n";
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
  while (i < line.size()) {
    if (line[i] == '#') break;
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

}  // namespace

RegularTree parse_tree(std::string_view text, AlphabetPtr alphabet) {
  struct Raw {
    std::string label, left, right;
    std::size_t line, column;
  };
  std::map<std::string, Raw> raw;
  std::vector<std::string> order;
  std::optional<std::pair<std::string, std::size_t>> root;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    if (tok[0].text == "root") {
      if (tok.size() != 2) throw ParseError(lineno, tok[0].column, "expected 'root <node>'");
      if (root) throw ParseError(lineno, tok[0].column, "duplicate root line");
      root = {tok[1].text, lineno};
      continue;
    }
    if (tok[0].text != "node") throw ParseError(lineno, tok[0].column, "expected 'node' or 'root'");
    if (tok.size() != 8 || tok[2].text != "label" || tok[4].text != "left" || tok[6].text != "right")
      throw ParseError(lineno, tok[0].column, "expected 'node <n> label <a> left <m> right <k>'");
    if (raw.count(tok[1].text)) throw ParseError(lineno, tok[1].column, "duplicate node '" + tok[1].text + "'");
    if (tok[3].text != kPortLabel && !alphabet->find(tok[3].text))
      throw ParseError(lineno, tok[3].column, "undeclared symbol '" + tok[3].text + "'");
    raw[tok[1].text] = Raw{tok[3].text, tok[5].text, tok[7].text, lineno, tok[5].column};
    order.push_back(tok[1].text);
  }
  if (!root) throw ParseError(lineno + 1, 1, "missing root line");
  if (!raw.count(root->first)) throw ParseError(root->second, 6, "root names an undeclared node");
  std::unordered_map<std::string, NodeId> ids;
  for (std::size_t i = 0; i < order.size(); ++i) ids[order[i]] = static_cast<NodeId>(i);
  std::vector<TreeNode> nodes;
  for (const auto& name : order) {
    const Raw& r = raw[name];
    TreeNode n;
    n.label = r.label == kPortLabel ? kPortSymbol : alphabet->at(r.label);
    auto child = [&](const std::string& c) -> std::optional<NodeId> {
      if (c == "-") return std::nullopt;
      auto it = ids.find(c);
      if (it == ids.end()) throw ParseError(r.line, r.column, "undeclared node '" + c + "'");
      return it->second;
    };
    n.left = child(r.left);
    n.right = child(r.right);
    if (n.is_port() && (n.left || n.right)) throw ParseError(r.line, r.column, "a port must be a leaf");
    nodes.push_back(n);
  }
  return RegularTree(std::move(alphabet), std::move(nodes), ids[root->first]);
}

}  // namespace wadge
