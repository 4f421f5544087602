#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/factorization.hpp"
#include "provfact/instances.hpp"
#include "provfact/ordering.hpp"
#include "provfact/query.hpp"

namespace provfact {

struct FlowNode {
  enum class Kind { Source, Target, Connector, Plan, Prefix };

  Kind kind = Kind::Connector;
  long long capacity = 0;  // Plan and Prefix nodes only
  int witness = -1;        // Plan nodes and connectors
  int list = -1;           // Plan nodes: ordering entry
  int entry = -1;
  int instance = -1;  // Prefix nodes
  std::string label;

  bool cuttable() const { return kind == Kind::Plan || kind == Kind::Prefix; }
};

// Node-capacitated network; every edge has unbounded capacity.
struct FlowGraph {
  Ordering ordering;
  PlanIndex index;
  std::vector<FlowNode> nodes;
  std::vector<std::pair<int, int>> edges;
  int source = 0;
  int target = 1;
  // [witness] (list, entry) -> Plan node
  std::vector<std::map<std::pair<int, int>, int>> plan_node;
  std::vector<int> instance_node;  // -1 when folded
  std::vector<int> folded_into;    // Plan node, or -1

  // Sum of all finite capacities plus one.
  long long infinity() const;
  // Plan nodes (list, entry) on the path of `plan` through the ordering.
  std::vector<std::pair<int, int>> plan_entries(int plan) const;
};

// Throws NonRpOrdering when `strict` and the ordering lacks running prefixes.
FlowGraph build_flow_graph(const Query& q, const Database& d, const WitnessSet& w, const Ordering& o,
                           bool strict = false);

struct MinCut {
  long long value = 0;
  std::vector<int> nodes;  // cut node ids, ascending
};

// Canonical cut: nodes whose inner edge leaves the residual source side.
MinCut min_cut(const FlowGraph& g);

struct FlowFactorization {
  Factorization fact;
  long long cut_value = 0;
  std::vector<int> cut;
  bool rp = true;
  // Witnesses with no fully cut plan, assigned the plan missing the least weight.
  std::size_t repaired = 0;
};

// Throws ExtractionFailure if some witness has no fully cut plan under a
// running-prefixes ordering.
FlowFactorization extract_factorization(const Query& q, const Database& d, const WitnessSet& w,
                                        const FlowGraph& g, const MinCut& cut);

FlowFactorization solve_flow(const Query& q, const Database& d, const WitnessSet& w, const Ordering& o,
                             bool strict = false);

void write_dot(const FlowGraph& g, std::ostream& out, const MinCut* cut = nullptr);

}  // namespace provfact
