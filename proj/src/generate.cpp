#include "provfact/generate.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "provfact/error.hpp"

namespace provfact {

Database gen_random(const GenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> value(1, std::max(spec.domain, 1));
  Database d;
  for (const auto& atom : spec.query.atoms()) {
    d.add_relation(atom.relation);
    for (std::size_t t = 0; t < spec.tuples; ++t) {
      std::vector<std::string> row;
      for (std::size_t k = 0; k < atom.vars.size(); ++k) row.push_back(std::to_string(value(rng)));
      d.add_tuple(atom.relation, row);
    }
  }
  return d;
}

std::size_t Graph::isolated_count() const {
  std::vector<bool> touched(vertices.size(), false);
  for (auto [a, b] : edges) touched[a] = touched[b] = true;
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
}

Graph parse_edge_list(std::string_view text) {
  Graph g;
  std::map<std::string, int> ids;
  std::set<std::pair<int, int>> seen;
  auto vertex = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<int>(g.vertices.size()));
    if (fresh) g.vertices.push_back(name);
    return it->second;
  };
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string u, v, extra;
    if (!(fields >> u)) continue;
    if (!(fields >> v) || (fields >> extra))
      throw FormatError("edge list line " + std::to_string(lineno) + ": expected `u v`");
    if (u == v) throw FormatError("edge list line " + std::to_string(lineno) + ": self-loop on " + u);
    int a = vertex(u), b = vertex(v);
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw FormatError("edge list line " + std::to_string(lineno) + ": repeated edge " + u + " " + v);
    g.edges.emplace_back(a, b);
  }
  return g;
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

Graph random_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  Graph g;
  for (int v = 1; v <= n; ++v) g.vertices.push_back(std::to_string(v));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) g.edges.emplace_back(a, b);
  return g;
}

Database gen_3star_gadget(const Graph& g) {
  Database d;
  for (const char* rel : {"R", "S", "T", "W"}) d.add_relation(rel);
  for (const auto& v : g.vertices) d.add_tuple("R", {v});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    auto c = [&](int n) { return "e" + std::to_string(e + 1) + "_" + std::to_string(n); };
    const std::vector<std::vector<std::string>> witnesses{
        {g.vertices[a], c(1), c(2)}, {c(3), c(4), c(2)}, {g.vertices[b], c(4), c(5)}};
    for (const auto& w : witnesses) {
      d.add_tuple("R", {w[0]});
      d.add_tuple("S", {w[1]});
      d.add_tuple("T", {w[2]});
      d.add_tuple("W", w);
    }
  }
  return d;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Database gen_triad_gadget(const Query& q, const Graph& g) {
  auto triad = has_triad(q);
  if (!triad) throw NoTriad(q.name() + " has no triad");
  const auto [r_atom, s_atom, t_atom] = *triad;
  const int nv = static_cast<int>(q.var_count());

  // Slots (witness, variable) that must agree within one edge gadget.
  DisjointSets sets(3 * nv);
  auto slot = [nv](int witness, int var) { return witness * nv + var; };
  for (int v : q.atom_var_indices(t_atom)) sets.unite(slot(0, v), slot(1, v));
  for (int v : q.atom_var_indices(s_atom)) sets.unite(slot(1, v), slot(2, v));
  // -1: fresh, 0: first endpoint, 1: second endpoint
  std::vector<int> owner(3 * nv, -1);
  for (int v : q.atom_var_indices(r_atom)) {
    for (auto [w, end] : {std::pair{0, 0}, std::pair{2, 1}}) {
      int root = sets.find(slot(w, v));
      if (owner[root] >= 0 && owner[root] != end)
        throw NoTriad("triad of " + q.name() + " admits no gadget: endpoint slots coincide");
      owner[root] = end;
    }
  }

  Database d;
  for (const auto& atom : q.atoms()) d.add_relation(atom.relation);
  for (const auto& v : g.vertices) {
    std::vector<std::string> row(q.atom(r_atom).vars.size(), v);
    d.add_tuple(q.atom(r_atom).relation, row);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    std::map<int, std::string> constant;
    int fresh = 0;
    auto value = [&](int s) -> std::string {
      int root = sets.find(s);
      if (owner[root] == 0) return g.vertices[a];
      if (owner[root] == 1) return g.vertices[b];
      auto it = constant.find(root);
      if (it == constant.end())
        it = constant.emplace(root, "e" + std::to_string(e + 1) + "_" + std::to_string(++fresh)).first;
      return it->second;
    };
    for (int w = 0; w < 3; ++w) {
      std::vector<std::string> binding;
      for (int v = 0; v < nv; ++v) binding.push_back(value(slot(w, v)));
      for (std::size_t at = 0; at < q.atom_count(); ++at) {
        std::vector<std::string> row;
        for (int v : q.atom_var_indices(at)) row.push_back(binding[v]);
        d.add_tuple(q.atom(at).relation, row);
      }
    }
  }
  return d;
}

}  // namespace provfact
