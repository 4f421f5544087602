#include "provfact/special.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "provfact/error.hpp"
#include "provfact/flow.hpp"
#include "provfact/matching.hpp"
#include "provfact/ordering.hpp"
#include "provfact/veo.hpp"

namespace provfact {

bool QueryClass::has(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

std::string QueryClass::to_string() const {
  std::string out;
  for (const auto& t : tags) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

QueryClass classify(const Query& q) {
  QueryClass c;
  c.mveo_count = enumerate_mveo(q).size();
  const bool triad = has_triad(q).has_value();
  if (is_hierarchical(q)) c.tags.push_back("hierarchical");
  if (c.mveo_count == 2) c.tags.push_back("two-mveo");
  if (match_shape(q, Shape::Q2Star)) c.tags.push_back("q2star");
  if (match_shape(q, Shape::TriangleUnary)) c.tags.push_back("triangle-unary");
  if (match_shape(q, Shape::TwoChainWe)) c.tags.push_back("two-chain-we");
  c.tags.push_back(triad ? "triad" : "linear");
  return c;
}

namespace {

bool binary(const Query& q, std::size_t a) {
  return q.atom(a).vars.size() == 2 && popcount(q.atom_vars(a)) == 2;
}

bool unary(const Query& q, std::size_t a) { return q.atom(a).vars.size() == 1; }

int only_var(VarSet s) { return __builtin_ctz(s); }

VarSet bit(int v) { return VarSet{1} << v; }

}  // namespace

std::optional<ShapeMatch> match_shape(const Query& q, Shape s) {
  std::vector<std::size_t> unaries, binaries;
  for (std::size_t a = 0; a < q.atom_count(); ++a) {
    if (unary(q, a))
      unaries.push_back(a);
    else if (binary(q, a))
      binaries.push_back(a);
    else
      return std::nullopt;
  }
  switch (s) {
    case Shape::Q2Star: {
      if (q.var_count() != 2 || unaries.size() != 2 || binaries.size() != 1) return std::nullopt;
      int x = only_var(q.atom_vars(unaries[0]));
      int y = only_var(q.atom_vars(unaries[1]));
      if (x == y) return std::nullopt;
      return ShapeMatch{{x, y}, {unaries[0], binaries[0], unaries[1]}};
    }
    case Shape::TriangleUnary: {
      if (q.var_count() != 3 || unaries.size() != 1 || binaries.size() != 3) return std::nullopt;
      int x = only_var(q.atom_vars(unaries[0]));
      std::vector<std::size_t> with_x, without_x;
      for (auto a : binaries) (q.atom_vars(a) & bit(x) ? with_x : without_x).push_back(a);
      if (with_x.size() != 2 || without_x.size() != 1) return std::nullopt;
      int y = only_var(q.atom_vars(with_x[0]) & ~bit(x));
      int z = only_var(q.atom_vars(with_x[1]) & ~bit(x));
      if (y == z || q.atom_vars(without_x[0]) != (bit(y) | bit(z))) return std::nullopt;
      return ShapeMatch{{x, y, z}, {unaries[0], with_x[0], without_x[0], with_x[1]}};
    }
    case Shape::TwoChainWe: {
      if (q.var_count() != 3 || unaries.size() != 2 || binaries.size() != 2) return std::nullopt;
      int x = only_var(q.atom_vars(unaries[0]));
      int z = only_var(q.atom_vars(unaries[1]));
      if (x == z) return std::nullopt;
      std::size_t r = binaries[0], t = binaries[1];
      if (!(q.atom_vars(r) & bit(x))) std::swap(r, t);
      if (!(q.atom_vars(r) & bit(x)) || (q.atom_vars(r) & bit(z))) return std::nullopt;
      int y = only_var(q.atom_vars(r) & ~bit(x));
      if (y == z || q.atom_vars(t) != (bit(y) | bit(z))) return std::nullopt;
      return ShapeMatch{{x, y, z}, {unaries[0], r, t, unaries[1]}};
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> tuple_counts(const Database& d, const WitnessSet& w) {
  std::vector<std::size_t> counts(d.tuple_count(), 0);
  for (const auto& x : w) {
    std::set<int> distinct(x.tuples.begin(), x.tuples.end());
    for (int t : distinct) ++counts[t];
  }
  return counts;
}

namespace {

ShapeMatch require(const Query& q, Shape s, const char* name) {
  auto m = match_shape(q, s);
  if (!m) throw ShapeMismatch(q.name() + " does not have the " + name + " shape");
  return *m;
}

// Index of the plan whose first two nodes are exactly {first} and {second}.
int find_chain(const Query& q, const std::vector<Veo>& plans, int first, int second) {
  for (std::size_t p = 0; p < plans.size(); ++p) {
    const auto& v = plans[p];
    if (v.node(0).vars != bit(first) || v.node(0).children.size() != 1) continue;
    if (v.node(v.node(0).children[0]).vars == bit(second)) return static_cast<int>(p);
  }
  throw ShapeMismatch("no plan " + q.var_name(first) + " <- " + q.var_name(second) + " among the minimal VEOs");
}

int find_root(const Query& q, const std::vector<Veo>& plans, VarSet root) {
  for (std::size_t p = 0; p < plans.size(); ++p)
    if (plans[p].node(0).vars == root) return static_cast<int>(p);
  throw ShapeMismatch("no plan rooted at " + render_node(q, root) + " among the minimal VEOs");
}

// Dense ids for keys.
template <class Key>
struct Interner {
  std::map<Key, int> ids;
  int operator()(const Key& k) { return ids.emplace(k, static_cast<int>(ids.size())).first->second; }
  int size() const { return static_cast<int>(ids.size()); }
};

}  // namespace

Factorization solve_q2star(const Query& q, const Database& d, const WitnessSet& w) {
  auto m = require(q, Shape::Q2Star, "two-star");
  const int x = m.vars[0], y = m.vars[1];
  auto plans = enumerate_mveo(q);
  const int x_root = find_root(q, plans, bit(x));
  const int y_root = find_root(q, plans, bit(y));

  Interner<int> left, right;
  BipartiteGraph g;
  std::vector<std::pair<int, int>> edge_of(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    edge_of[i] = {left(w[i].binding[x]), right(w[i].binding[y])};
    g.edges.push_back(edge_of[i]);
  }
  g.left = left.size();
  g.right = right.size();
  auto cover = minimum_vertex_cover(g);
  std::vector<int> assignment(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    assignment[i] = cover.left[edge_of[i].first] ? x_root : y_root;
  return assemble(q, d, w, plans, assignment);
}

Factorization solve_triangle_unary(const Query& q, const Database& d, const WitnessSet& w) {
  auto m = require(q, Shape::TriangleUnary, "triangle-unary");
  const int x = m.vars[0], y = m.vars[1], z = m.vars[2];
  const std::size_t r_atom = m.atoms[1], t_atom = m.atoms[3];
  auto plans = enumerate_mveo(q);
  const int ur = find_chain(q, plans, x, y);
  const int ut = find_chain(q, plans, x, z);
  const int s_plan = find_root(q, plans, bit(y) | bit(z));
  auto counts = tuple_counts(d, w);

  // First graph: x <- y against x <- z. Second graph: x against (y, z).
  using Pair = std::pair<int, int>;
  Interner<Pair> xy, xz, yz;
  Interner<int> xs;
  BipartiteGraph g1, g2;
  std::vector<bool> first(w.size());
  std::vector<Pair> edge_of(w.size());
  std::set<int> x_in_first;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& b = w[i].binding;
    first[i] = counts[w[i].tuples[r_atom]] > 1 || counts[w[i].tuples[t_atom]] > 1;
    if (first[i]) {
      edge_of[i] = {xy({b[x], b[y]}), xz({b[x], b[z]})};
      g1.edges.push_back(edge_of[i]);
      x_in_first.insert(b[x]);
    } else {
      edge_of[i] = {xs(b[x]), yz({b[y], b[z]})};
    }
  }
  g1.left = xy.size();
  g1.right = xz.size();
  g2.left = xs.size();
  g2.right = yz.size();

  // Nodes p(x) whose x occurs in the first graph are forced into the cover;
  // their edges are covered already.
  std::vector<bool> forced(g2.left, false);
  for (const auto& [value, id] : xs.ids) forced[id] = x_in_first.count(value) > 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!first[i] && !forced[edge_of[i].first]) g2.edges.push_back(edge_of[i]);

  auto c1 = minimum_vertex_cover(g1);
  auto c2 = minimum_vertex_cover(g2);
  for (int l = 0; l < g2.left; ++l)
    if (forced[l]) c2.left[l] = true;

  std::vector<int> assignment(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto [a, b] = edge_of[i];
    if (first[i])
      assignment[i] = c1.left[a] ? ur : ut;
    else
      assignment[i] = c2.left[a] ? ur : s_plan;
  }
  return assemble(q, d, w, plans, assignment);
}

Factorization solve_two_chain_we(const Query& q, const Database& d, const WitnessSet& w) {
  auto m = require(q, Shape::TwoChainWe, "two-chain with endpoints");
  const int x = m.vars[0], y = m.vars[1], z = m.vars[2];
  const std::size_t r_atom = m.atoms[1], s_atom = m.atoms[2];
  auto plans = enumerate_mveo(q);
  const int center = find_root(q, plans, bit(y));
  const std::vector<int> order{find_chain(q, plans, x, z), find_chain(q, plans, x, y),
                               find_chain(q, plans, z, y), find_chain(q, plans, z, x)};
  auto counts = tuple_counts(d, w);

  std::vector<int> assignment(w.size(), -1);
  WitnessSet rest;
  std::vector<std::size_t> rest_index;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (counts[w[i].tuples[r_atom]] > 1 && counts[w[i].tuples[s_atom]] > 1) {
      assignment[i] = center;
    } else {
      rest.witnesses.push_back(w[i]);
      rest_index.push_back(i);
    }
  }
  if (!rest.empty()) {
    std::vector<Veo> four;
    for (int p : order) four.push_back(plans[p]);
    auto ordering = build_flat_ordering(q, four, {0, 1, 2, 3});
    auto flow = solve_flow(q, d, rest, ordering);
    for (std::size_t j = 0; j < rest.size(); ++j) assignment[rest_index[j]] = order[flow.fact.assignment[j]];
  }
  return assemble(q, d, w, plans, assignment);
}

}  // namespace provfact
