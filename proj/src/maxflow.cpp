#include "provfact/maxflow.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>
#include <deque>

namespace provfact {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using Graph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, long long,
                    boost::property<boost::edge_residual_capacity_t, long long,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;

}  // namespace

struct MaxFlow::Impl {
  Graph g;
};

MaxFlow::MaxFlow() : impl_(std::make_unique<Impl>()) {}
MaxFlow::~MaxFlow() = default;
MaxFlow::MaxFlow(MaxFlow&&) noexcept = default;
MaxFlow& MaxFlow::operator=(MaxFlow&&) noexcept = default;

int MaxFlow::add_node() { return static_cast<int>(boost::add_vertex(impl_->g)); }

std::size_t MaxFlow::node_count() const { return boost::num_vertices(impl_->g); }

void MaxFlow::add_edge(int from, int to, long long capacity) {
  auto& g = impl_->g;
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  auto e = boost::add_edge(from, to, g).first;
  auto r = boost::add_edge(to, from, g).first;
  cap[e] = capacity;
  cap[r] = 0;
  rev[e] = r;
  rev[r] = e;
}

long long MaxFlow::solve(int source, int sink) {
  return boost::edmonds_karp_max_flow(impl_->g, source, sink);
}

std::vector<bool> MaxFlow::residual_reachable(int source) const {
  const auto& g = impl_->g;
  auto res = boost::get(boost::edge_residual_capacity, g);
  std::vector<bool> seen(boost::num_vertices(g), false);
  std::deque<int> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (auto [it, end] = boost::out_edges(u, g); it != end; ++it) {
      int v = static_cast<int>(boost::target(*it, g));
      if (!seen[v] && res[*it] > 0) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace provfact
