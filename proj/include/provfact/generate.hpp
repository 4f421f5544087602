#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/query.hpp"

namespace provfact {

struct GenSpec {
  Query query;
  int domain = 10;           // values 1..domain
  std::size_t tuples = 10;   // samples per relation before deduplication
  std::uint64_t seed = 0;
};

// Uniform samples over domain^arity per relation, duplicates dropped.
Database gen_random(const GenSpec& spec);

// Simple undirected graph.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;

  std::size_t vertex_count() const { return vertices.size(); }
  // Vertices without incident edges.
  std::size_t isolated_count() const;
};

// One `u v` pair per line; `#` starts a comment. Vertices are named by the
// tokens in order of appearance. Throws FormatError on self-loops, repeated
// edges, or malformed lines.
Graph parse_edge_list(std::string_view text);
Graph load_edge_list(const std::filesystem::path& path);

// G(n, p) with vertices named 1..n.
Graph random_graph(int n, double p, std::uint64_t seed);

// Three-star query gadget: one R tuple per vertex, three witnesses per edge
// (a, b) over edge-scoped constants `e<edge>_<n>`.
Database gen_3star_gadget(const Graph& g);

// Same construction for any query with a triad (R, S, T): per edge, the first
// two witnesses share the T tuple, the last two share the S tuple, and the
// R tuples of the outer witnesses belong to the edge's endpoints.
// Throws NoTriad.
Database gen_triad_gadget(const Query& q, const Graph& g);

}  // namespace provfact
