#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace provfact {

// Edge-capacitated directed network solved with shortest augmenting paths.
class MaxFlow {
 public:
  MaxFlow();
  ~MaxFlow();
  MaxFlow(MaxFlow&&) noexcept;
  MaxFlow& operator=(MaxFlow&&) noexcept;

  int add_node();
  std::size_t node_count() const;
  void add_edge(int from, int to, long long capacity);

  long long solve(int source, int sink);
  // Nodes reachable from `source` in the residual network of the last solve.
  std::vector<bool> residual_reachable(int source) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace provfact
