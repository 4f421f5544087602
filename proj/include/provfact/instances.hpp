#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/query.hpp"
#include "provfact/veo.hpp"

namespace provfact {

// A root path with every variable replaced by a constant. `values` lists the
// constants node by node, each node's variables in index order.
struct PrefixInstance {
  std::vector<VarSet> path;
  std::vector<int> values;

  friend bool operator==(const PrefixInstance& a, const PrefixInstance& b) {
    return a.path == b.path && a.values == b.values;
  }
};

// Throws UnboundVariable if the binding lacks a path variable (-1 entries).
PrefixInstance instantiate(const std::vector<VarSet>& path, const std::vector<int>& binding);
PrefixInstance instantiate(const Veo& v, int node, const std::vector<int>& binding);

// Exact key used for sharing: equal keys iff equal instances.
std::string instance_key(const PrefixInstance& p);

// Human form, e.g. `z1 <- y1` or `(z0x0) <- y0`.
std::string render_instance(const Query& q, const Database& d, const PrefixInstance& p);

// Table-prefix instances of a plan list over a witness set, interned so that
// identical instances (across witnesses and plans) share one id.
struct PlanIndex {
  std::vector<Veo> plans;
  std::vector<std::vector<TablePrefix>> prefixes;   // per plan
  std::vector<std::vector<VarSet>> paths;           // distinct table-prefix paths
  std::vector<int> path_weight;                     // per path
  std::vector<std::vector<int>> path_plans;         // plans having the path as a table prefix
  std::vector<std::vector<int>> prefix_path;        // [plan][i] -> path id
  std::vector<PrefixInstance> instances;
  std::vector<int> instance_weight;
  std::vector<int> instance_path;
  // [witness][plan] -> instance ids, aligned with prefixes[plan]
  std::vector<std::vector<std::vector<int>>> occ;

  std::size_t witness_count() const { return occ.size(); }
  std::size_t plan_count() const { return plans.size(); }
  // Total weight of the distinct instances used by an assignment.
  long long cost(const std::vector<int>& assignment) const;
};

PlanIndex build_plan_index(const Query& q, const WitnessSet& w, std::vector<Veo> plans);

}  // namespace provfact
