#include "provfact/matching.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <deque>

namespace provfact {

std::vector<int> maximum_matching(const BipartiteGraph& g) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const int n = g.left + g.right;
  Graph graph(n);
  for (auto [l, r] : g.edges) boost::add_edge(l, g.left + r, graph);
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(n);
  boost::edmonds_maximum_cardinality_matching(graph, &mate[0]);
  const auto none = boost::graph_traits<Graph>::null_vertex();
  std::vector<int> out(n, -1);
  for (int v = 0; v < n; ++v)
    if (mate[v] != none) out[v] = static_cast<int>(mate[v]);
  return out;
}

VertexCover minimum_vertex_cover(const BipartiteGraph& g) {
  auto mate = maximum_matching(g);
  std::vector<std::vector<int>> adj(g.left);
  for (auto [l, r] : g.edges) adj[l].push_back(r);

  // Alternating paths from free left vertices: unmatched edges left to
  // right, matched edges right to left.
  std::vector<bool> seen_left(g.left, false), seen_right(g.right, false);
  std::deque<int> queue;
  for (int l = 0; l < g.left; ++l)
    if (mate[l] < 0) {
      seen_left[l] = true;
      queue.push_back(l);
    }
  while (!queue.empty()) {
    int l = queue.front();
    queue.pop_front();
    for (int r : adj[l]) {
      if (seen_right[r] || mate[l] == g.left + r) continue;
      seen_right[r] = true;
      int back = mate[g.left + r];
      if (back >= 0 && !seen_left[back]) {
        seen_left[back] = true;
        queue.push_back(back);
      }
    }
  }

  VertexCover c;
  c.left.assign(g.left, false);
  c.right.assign(g.right, false);
  for (int l = 0; l < g.left; ++l)
    if (!seen_left[l]) {
      c.left[l] = true;
      ++c.size;
    }
  for (int r = 0; r < g.right; ++r)
    if (seen_right[r]) {
      c.right[r] = true;
      ++c.size;
    }
  return c;
}

}  // namespace provfact
