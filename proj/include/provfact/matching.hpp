#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace provfact {

// Bipartite graph with `left` + `right` vertices; edges are (left, right).
struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::pair<int, int>> edges;
};

// mate[v] for v in [0, left + right): right vertex r is `left + r`; -1 if free.
std::vector<int> maximum_matching(const BipartiteGraph& g);

struct VertexCover {
  std::vector<bool> left;
  std::vector<bool> right;
  std::size_t size = 0;
};

// Minimum vertex cover from a maximum matching by alternating reachability.
VertexCover minimum_vertex_cover(const BipartiteGraph& g);

}  // namespace provfact
