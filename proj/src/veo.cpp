#include "provfact/veo.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "provfact/error.hpp"

namespace provfact {

namespace {

std::vector<std::string> sorted_names(const Query& q, VarSet s) {
  auto names = var_names(q, s);
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

std::vector<int> node_order(const Query& q, VarSet s) {
  // A node equal to some atom's variable set keeps that atom's argument order.
  std::vector<int> order;
  for (std::size_t a = 0; a < q.atom_count() && order.empty() && popcount(s) > 1; ++a)
    if (q.atom_vars(a) == s) {
      for (int v : q.atom_var_indices(a))
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
  if (order.empty())
    for (std::size_t v = 0; v < q.var_count(); ++v)
      if ((s >> v) & 1u) order.push_back(static_cast<int>(v));
  return order;
}

std::string render_node(const Query& q, VarSet s) {
  if (popcount(s) == 1) return q.var_name(__builtin_ctz(s));
  std::string out = "(";
  for (int v : node_order(q, s)) out += q.var_name(v);
  return out + ")";
}

std::string render_path(const Query& q, const std::vector<VarSet>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += " <- ";
    out += render_node(q, path[i]);
  }
  return out;
}

Veo::Veo(const Query& q, std::vector<VeoNode> nodes) {
  if (nodes.empty()) throw IllegalAssignment("VEO has no nodes");
  int root = -1;
  VarSet seen = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].vars == 0) throw IllegalAssignment("VEO node with no variables");
    if (nodes[i].vars & seen) throw IllegalAssignment("VEO nodes overlap");
    seen |= nodes[i].vars;
    if (nodes[i].parent < 0) {
      if (root >= 0) throw IllegalAssignment("VEO has several roots");
      root = static_cast<int>(i);
    }
  }
  if (root < 0) throw IllegalAssignment("VEO has no root");
  if (seen != q.all_vars()) throw IllegalAssignment("VEO nodes do not cover the query variables");
  for (auto& n : nodes) n.children.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].parent >= 0) {
      if (nodes[i].parent >= static_cast<int>(nodes.size()))
        throw IllegalAssignment("VEO parent index out of range");
      nodes[nodes[i].parent].children.push_back(static_cast<int>(i));
    }
  for (auto& n : nodes)
    std::sort(n.children.begin(), n.children.end(), [&](int a, int b) {
      return sorted_names(q, nodes[a].vars) < sorted_names(q, nodes[b].vars);
    });
  // Re-emit in preorder.
  std::vector<int> order;
  std::function<void(int)> visit = [&](int u) {
    order.push_back(u);
    for (int c : nodes[u].children) visit(c);
  };
  visit(root);
  if (order.size() != nodes.size()) throw IllegalAssignment("VEO is not a tree");
  std::vector<int> pos(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  nodes_.resize(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& old = nodes[order[i]];
    auto& n = nodes_[i];
    n.vars = old.vars;
    n.parent = old.parent < 0 ? -1 : pos[old.parent];
    for (int c : old.children) n.children.push_back(pos[c]);
  }
  sub_str_.assign(nodes_.size(), {});
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    std::string s = render_node(q, nodes_[i].vars);
    const auto& kids = nodes_[i].children;
    if (kids.size() == 1) {
      s += " <- " + sub_str_[kids[0]];
    } else if (kids.size() > 1) {
      s += " <- (";
      for (std::size_t k = 0; k < kids.size(); ++k) {
        if (k) s += ", ";
        s += sub_str_[kids[k]];
      }
      s += ")";
    }
    sub_str_[i] = std::move(s);
  }
  str_ = sub_str_[0];
}

VarSet Veo::subtree_vars(int i) const {
  VarSet s = nodes_[i].vars;
  for (int c : nodes_[i].children) s |= subtree_vars(c);
  return s;
}

std::vector<VarSet> Veo::path_to(int i) const {
  std::vector<VarSet> path;
  for (int u = i; u >= 0; u = nodes_[u].parent) path.push_back(nodes_[u].vars);
  std::reverse(path.begin(), path.end());
  return path;
}

int Veo::depth(int i) const {
  int d = 0;
  for (int u = nodes_[i].parent; u >= 0; u = nodes_[u].parent) ++d;
  return d;
}

bool Veo::is_chain() const {
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [](const VeoNode& n) { return n.children.size() <= 1; });
}

namespace {

class VeoParser {
 public:
  VeoParser(const Query& q, std::string_view text) : q_(q), text_(text) {}

  Veo parse() {
    int root = tree(-1);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    (void)root;
    return Veo(q_, nodes_);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError("VEO '" + std::string(text_) + "': " + what);
  }

  // Longest variable name matching at the current position.
  int variable() {
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t v = 0; v < q_.var_count(); ++v) {
      const auto& name = q_.var_name(static_cast<int>(v));
      if (name.size() > best_len && text_.substr(pos_, name.size()) == name) {
        best = static_cast<int>(v);
        best_len = name.size();
      }
    }
    if (best < 0) fail("unknown variable at offset " + std::to_string(pos_));
    pos_ += best_len;
    return best;
  }

  // True if the parenthesized group at pos_ is a single multi-variable node.
  bool group_is_node() const {
    std::size_t p = pos_ + 1;
    while (p < text_.size() && text_[p] != ')') {
      if (text_[p] == ',' || text_[p] == '<' || text_[p] == '(') return false;
      ++p;
    }
    return true;
  }

  VarSet node_vars() {
    skip_ws();
    VarSet s = 0;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        s |= VarSet{1} << variable();
        skip_ws();
      }
      if (!accept(")")) fail("unterminated node");
    } else {
      s = VarSet{1} << variable();
    }
    return s;
  }

  int tree(int parent) {
    VeoNode n;
    n.vars = node_vars();
    n.parent = parent;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    if (accept("<-")) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(' && !group_is_node()) {
        ++pos_;
        do {
          tree(id);
        } while (accept(","));
        if (!accept(")")) fail("expected ')'");
      } else {
        tree(id);
      }
    }
    return id;
  }

  const Query& q_;
  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<VeoNode> nodes_;
};

}  // namespace

Veo parse_veo(const Query& q, std::string_view text) { return VeoParser(q, text).parse(); }

std::vector<int> table_prefix_nodes(const Veo& v, const Query& q) {
  std::vector<int> out(q.atom_count(), -1);
  std::vector<VarSet> prefix(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    int p = v.node(static_cast<int>(i)).parent;
    prefix[i] = v.node(static_cast<int>(i)).vars | (p >= 0 ? prefix[p] : 0);
  }
  for (std::size_t a = 0; a < q.atom_count(); ++a) {
    VarSet av = q.atom_vars(a);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if ((prefix[i] & av) == av && (v.node(static_cast<int>(i)).vars & av)) {
        out[a] = static_cast<int>(i);
        break;
      }
    }
  }
  return out;
}

bool is_legal(const Veo& v, const Query& q) {
  if (v.size() == 0) return false;
  VarSet all = 0;
  for (const auto& n : v.nodes()) all |= n.vars;
  if (all != q.all_vars()) return false;
  auto nodes = table_prefix_nodes(v, q);
  return std::none_of(nodes.begin(), nodes.end(), [](int n) { return n < 0; });
}

std::vector<TablePrefix> table_prefixes(const Veo& v, const Query& q) {
  auto nodes = table_prefix_nodes(v, q);
  std::map<int, TablePrefix> by_node;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    if (nodes[a] < 0) throw IllegalAssignment("VEO " + v.str() + " is not legal for " + q.name());
    auto& tp = by_node[nodes[a]];
    tp.node = nodes[a];
    tp.weight += 1;
    tp.atoms.push_back(a);
  }
  std::vector<TablePrefix> out;
  for (auto& [node, tp] : by_node) {
    tp.path = v.path_to(node);
    out.push_back(std::move(tp));
  }
  std::sort(out.begin(), out.end(), [](const TablePrefix& a, const TablePrefix& b) {
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
  });
  return out;
}

std::vector<VarSet> dissociation_of(const Veo& v, const Query& q) {
  auto nodes = table_prefix_nodes(v, q);
  std::vector<VarSet> out(q.atom_count(), 0);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    if (nodes[a] < 0) throw IllegalAssignment("VEO " + v.str() + " is not legal for " + q.name());
    VarSet path = 0;
    for (auto s : v.path_to(nodes[a])) path |= s;
    out[a] = path & ~q.atom_vars(a);
  }
  return out;
}

bool dissociation_leq(const std::vector<VarSet>& a, const std::vector<VarSet>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] & b[i]) != a[i]) return false;
  return true;
}

namespace {

// Dynamic program over variable subsets. The legality constraint restricted to
// a subset V only depends on V (atoms intersected with V), so results memoize.
class VeoEnumerator {
 public:
  struct Tree {
    VarSet node;
    std::vector<int> kids;
  };

  explicit VeoEnumerator(const Query& q) : q_(q) {}

  const std::vector<int>& trees(VarSet v) {
    auto it = tree_memo_.find(v);
    if (it != tree_memo_.end()) return it->second;
    std::vector<int> out;
    for (VarSet n = v; n; n = (n - 1) & v) {
      VarSet rest = v & ~n;
      if (!rest) {
        out.push_back(add({n, {}}));
        continue;
      }
      const auto& fs = forests(rest);
      for (const auto& f : fs) out.push_back(add({n, f}));
    }
    return tree_memo_[v] = std::move(out);
  }

  const Tree& tree(int id) const { return pool_[id]; }

  Veo to_veo(int id) const {
    std::vector<VeoNode> nodes;
    std::function<void(int, int)> emit = [&](int t, int parent) {
      int me = static_cast<int>(nodes.size());
      nodes.push_back({pool_[t].node, parent, {}});
      for (int k : pool_[t].kids) emit(k, me);
    };
    emit(id, -1);
    return Veo(q_, std::move(nodes));
  }

  std::vector<VarSet> dissociation(int id) const {
    std::vector<VarSet> out(q_.atom_count(), 0);
    std::function<void(int, VarSet)> walk = [&](int t, VarSet above) {
      VarSet path = above | pool_[t].node;
      for (std::size_t a = 0; a < q_.atom_count(); ++a) {
        VarSet av = q_.atom_vars(a);
        if ((path & av) == av && (pool_[t].node & av)) out[a] = path & ~av;
      }
      for (int k : pool_[t].kids) walk(k, path);
    };
    walk(id, 0);
    return out;
  }

 private:
  int add(Tree t) {
    pool_.push_back(std::move(t));
    return static_cast<int>(pool_.size()) - 1;
  }

  const std::vector<std::vector<int>>& forests(VarSet w) {
    auto it = forest_memo_.find(w);
    if (it != forest_memo_.end()) return it->second;
    // Components of the atoms restricted to w.
    std::vector<VarSet> comps;
    for (std::size_t a = 0; a < q_.atom_count(); ++a) {
      VarSet part = q_.atom_vars(a) & w;
      if (!part) continue;
      VarSet merged = part;
      std::vector<VarSet> keep;
      for (auto c : comps) {
        if (c & merged) merged |= c;
        else keep.push_back(c);
      }
      keep.push_back(merged);
      comps = std::move(keep);
    }
    std::sort(comps.begin(), comps.end());
    std::vector<std::vector<int>> out;
    // Enumerate set partitions of the components into blocks.
    std::vector<int> block(comps.size(), 0);
    std::function<void(std::size_t, int)> partition = [&](std::size_t i, int used) {
      if (i == comps.size()) {
        std::vector<VarSet> blocks(used, 0);
        for (std::size_t c = 0; c < comps.size(); ++c) blocks[block[c]] |= comps[c];
        std::vector<std::vector<int>> choices;
        for (auto b : blocks) choices.push_back(trees(b));
        std::vector<int> pick;
        std::function<void(std::size_t)> product = [&](std::size_t j) {
          if (j == choices.size()) {
            out.push_back(pick);
            return;
          }
          for (int t : choices[j]) {
            pick.push_back(t);
            product(j + 1);
            pick.pop_back();
          }
        };
        product(0);
        return;
      }
      for (int b = 0; b <= used; ++b) {
        block[i] = b;
        partition(i + 1, std::max(used, b + 1));
      }
    };
    partition(0, 0);
    return forest_memo_[w] = std::move(out);
  }

  const Query& q_;
  std::vector<Tree> pool_;
  std::unordered_map<VarSet, std::vector<int>> tree_memo_;
  std::unordered_map<VarSet, std::vector<std::vector<int>>> forest_memo_;
};

void check_var_limit(const Query& q, const VeoOptions& opts) {
  if (q.var_count() > opts.max_vars)
    throw TooManyVariables("query " + q.name() + " has " + std::to_string(q.var_count()) +
                           " variables; VEO enumeration is capped at " +
                           std::to_string(opts.max_vars));
}

}  // namespace

std::vector<Veo> enumerate_veos(const Query& q, const VeoOptions& opts) {
  check_var_limit(q, opts);
  VeoEnumerator en(q);
  std::vector<Veo> out;
  for (int id : en.trees(q.all_vars())) out.push_back(en.to_veo(id));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Veo> enumerate_mveo(const Query& q, const VeoOptions& opts) {
  check_var_limit(q, opts);
  VeoEnumerator en(q);
  std::map<std::vector<VarSet>, Veo> best;
  for (int id : en.trees(q.all_vars())) {
    auto d = en.dissociation(id);
    auto it = best.find(d);
    if (it == best.end()) {
      best.emplace(std::move(d), en.to_veo(id));
    } else {
      Veo v = en.to_veo(id);
      if (v < it->second) it->second = std::move(v);
    }
  }
  std::vector<std::pair<const std::vector<VarSet>*, const Veo*>> items;
  for (const auto& [d, v] : best) items.emplace_back(&d, &v);
  std::vector<Veo> out;
  for (const auto& [d, v] : items) {
    bool dominated = false;
    for (const auto& [e, w] : items) {
      if (e != d && dissociation_leq(*e, *d)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(*v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace provfact
