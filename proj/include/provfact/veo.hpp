#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "provfact/query.hpp"

namespace provfact {

struct VeoNode {
  VarSet vars = 0;
  int parent = -1;
  std::vector<int> children;
};

// Variable elimination order: a rooted tree whose nodes partition the query
// variables. Nodes are stored in canonical preorder (root at index 0, children
// sorted alphabetically by their variable names).
class Veo {
 public:
  Veo() = default;
  Veo(const Query& q, std::vector<VeoNode> nodes);

  const std::vector<VeoNode>& nodes() const { return nodes_; }
  const VeoNode& node(int i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  const std::string& str() const { return str_; }
  // Serialization of the subtree rooted at `i`.
  const std::string& subtree_str(int i) const { return sub_str_[i]; }
  VarSet subtree_vars(int i) const;
  std::vector<VarSet> path_to(int i) const;
  int depth(int i) const;
  bool is_chain() const;

  friend bool operator==(const Veo& a, const Veo& b) { return a.str_ == b.str_; }
  friend bool operator<(const Veo& a, const Veo& b) { return a.str_ < b.str_; }

 private:
  std::vector<VeoNode> nodes_;
  std::vector<std::string> sub_str_;
  std::string str_;
};

struct VeoOptions {
  std::size_t max_vars = 8;
};

// Variable order used when rendering a node.
std::vector<int> node_order(const Query& q, VarSet s);

// Renders one node: a single variable, or `(yz)` for several.
std::string render_node(const Query& q, VarSet s);
std::string render_path(const Query& q, const std::vector<VarSet>& path);

// Parses the serialized form, e.g. `z <- (u, y <- x)` or `(yz) <- x`.
Veo parse_veo(const Query& q, std::string_view text);

bool is_legal(const Veo& v, const Query& q);

std::vector<Veo> enumerate_veos(const Query& q, const VeoOptions& opts = {});
std::vector<Veo> enumerate_mveo(const Query& q, const VeoOptions& opts = {});

struct TablePrefix {
  std::vector<VarSet> path;
  int node = 0;  // node of the Veo where the path ends
  int weight = 0;
  std::vector<std::size_t> atoms;
};

// One entry per distinct table-prefix path, ordered by (depth, path).
std::vector<TablePrefix> table_prefixes(const Veo& v, const Query& q);

// Node at which each atom's table prefix ends.
std::vector<int> table_prefix_nodes(const Veo& v, const Query& q);

// Per atom, the variables added by the plan: var(prefix) \ var(atom).
std::vector<VarSet> dissociation_of(const Veo& v, const Query& q);

// Componentwise subset order on dissociations.
bool dissociation_leq(const std::vector<VarSet>& a, const std::vector<VarSet>& b);

}  // namespace provfact
