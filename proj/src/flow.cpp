#include "provfact/flow.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "provfact/error.hpp"
#include "provfact/maxflow.hpp"

namespace provfact {

long long FlowGraph::infinity() const {
  long long total = 1;
  for (const auto& n : nodes)
    if (n.cuttable()) total += n.capacity;
  return total;
}

namespace {

void collect_entries(const Ordering& o, int list, int plan, std::vector<std::pair<int, int>>& out) {
  const auto& entries = o.lists[list].entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!std::binary_search(e.cover.begin(), e.cover.end(), plan)) continue;
    if (e.kind == OrderingEntry::Kind::Product) {
      for (int sub : e.parallel) collect_entries(o, sub, plan, out);
    } else {
      out.emplace_back(list, static_cast<int>(i));
    }
  }
}

class Builder {
 public:
  Builder(const Query& q, const Database& d, FlowGraph& g) : q_(q), d_(d), g_(g) {}

  void build(const WitnessSet& w) {
    g_.nodes.push_back({FlowNode::Kind::Source, 0, -1, -1, -1, -1, "s"});
    g_.nodes.push_back({FlowNode::Kind::Target, 0, -1, -1, -1, -1, "t"});
    const auto& ix = g_.index;
    g_.plan_node.resize(w.size());
    boundary_.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      int first = connector(static_cast<int>(i));
      int last = connector(static_cast<int>(i));
      g_.edges.emplace_back(g_.source, first);
      g_.edges.emplace_back(last, g_.target);
      chain(static_cast<int>(i), 0, first, last);
    }

    // Distinct (witness, span) occurrences per prefix instance.
    std::vector<std::set<std::tuple<int, int, int, int>>> occurrences(ix.instances.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t p = 0; p < ix.plan_count(); ++p)
        for (std::size_t t = 0; t < ix.occ[i][p].size(); ++t) {
          int inst = ix.occ[i][p][t];
          const auto& plans = ix.path_plans[ix.prefix_path[p][t]];
          auto span = g_.ordering.locate(plans);
          Span s = span ? *span : g_.ordering.fallback_span(plans);
          occurrences[inst].emplace(static_cast<int>(i), s.list, s.first, s.last);
        }

    g_.instance_node.assign(ix.instances.size(), -1);
    g_.folded_into.assign(ix.instances.size(), -1);
    for (std::size_t inst = 0; inst < ix.instances.size(); ++inst) {
      const auto& occ = occurrences[inst];
      if (occ.empty()) continue;
      if (occ.size() == 1) {
        auto [i, list, first, last] = *occ.begin();
        const auto& entry = g_.ordering.lists[list].entries[first];
        if (first == last && entry.kind != OrderingEntry::Kind::Product) {
          int node = g_.plan_node[i].at({list, first});
          g_.nodes[node].capacity += ix.instance_weight[inst];
          g_.folded_into[inst] = node;
          continue;
        }
      }
      int node = static_cast<int>(g_.nodes.size());
      FlowNode n;
      n.kind = FlowNode::Kind::Prefix;
      n.capacity = ix.instance_weight[inst];
      n.instance = static_cast<int>(inst);
      n.label = render_instance(q_, d_, ix.instances[inst]);
      g_.nodes.push_back(std::move(n));
      g_.instance_node[inst] = node;
      for (auto [i, list, first, last] : occ) {
        const auto& b = boundary_[i].at(list);
        g_.edges.emplace_back(b[first], node);
        g_.edges.emplace_back(node, b[last + 1]);
      }
    }
  }

 private:
  int connector(int witness) {
    FlowNode n;
    n.kind = FlowNode::Kind::Connector;
    n.witness = witness;
    n.label = "c";
    g_.nodes.push_back(std::move(n));
    return static_cast<int>(g_.nodes.size()) - 1;
  }

  // Serial chain for `list` between connectors `left` and `right`.
  void chain(int witness, int list, int left, int right) {
    const auto& entries = g_.ordering.lists[list].entries;
    std::vector<int> b{left};
    for (std::size_t i = 1; i < entries.size(); ++i) b.push_back(connector(witness));
    b.push_back(right);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      if (e.kind == OrderingEntry::Kind::Product) {
        for (int sub : e.parallel) chain(witness, sub, b[i], b[i + 1]);
        continue;
      }
      FlowNode n;
      n.kind = FlowNode::Kind::Plan;
      n.witness = witness;
      n.list = list;
      n.entry = static_cast<int>(i);
      n.label = "w" + std::to_string(witness + 1) + ": " + e.label;
      int id = static_cast<int>(g_.nodes.size());
      g_.nodes.push_back(std::move(n));
      g_.plan_node[witness][{list, static_cast<int>(i)}] = id;
      g_.edges.emplace_back(b[i], id);
      g_.edges.emplace_back(id, b[i + 1]);
    }
    boundary_[witness][list] = std::move(b);
  }

  const Query& q_;
  const Database& d_;
  FlowGraph& g_;
  // [witness] list -> connectors c_0..c_r
  std::vector<std::map<int, std::vector<int>>> boundary_;
};

}  // namespace

std::vector<std::pair<int, int>> FlowGraph::plan_entries(int plan) const {
  std::vector<std::pair<int, int>> out;
  collect_entries(ordering, 0, plan, out);
  return out;
}

FlowGraph build_flow_graph(const Query& q, const Database& d, const WitnessSet& w, const Ordering& o,
                           bool strict) {
  if (strict && !o.rp) throw NonRpOrdering("ordering " + o.to_string(true) + " lacks running prefixes");
  FlowGraph g;
  g.ordering = o;
  g.index = build_plan_index(q, w, o.plans);
  Builder(q, d, g).build(w);
  return g;
}

MinCut min_cut(const FlowGraph& g) {
  MaxFlow net;
  // Node i has halves 2i (in) and 2i+1 (out).
  for (std::size_t i = 0; i < 2 * g.nodes.size(); ++i) net.add_node();
  const long long inf = g.infinity();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    net.add_edge(2 * i, 2 * i + 1, n.cuttable() ? n.capacity : inf);
  }
  for (auto [u, v] : g.edges) net.add_edge(2 * u + 1, 2 * v, inf);
  MinCut cut;
  cut.value = net.solve(2 * g.source, 2 * g.target + 1);
  auto reach = net.residual_reachable(2 * g.source);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (g.nodes[i].cuttable() && reach[2 * i] && !reach[2 * i + 1]) cut.nodes.push_back(static_cast<int>(i));
  return cut;
}

FlowFactorization extract_factorization(const Query& q, const Database& d, const WitnessSet& w,
                                        const FlowGraph& g, const MinCut& cut) {
  const auto& ix = g.index;
  std::vector<bool> in_cut(g.nodes.size(), false);
  for (int n : cut.nodes) in_cut[n] = true;
  std::vector<std::vector<std::pair<int, int>>> entries;
  for (std::size_t p = 0; p < ix.plan_count(); ++p) entries.push_back(g.plan_entries(static_cast<int>(p)));
  const auto order = g.ordering.flatten();

  FlowFactorization out;
  out.cut_value = cut.value;
  out.cut = cut.nodes;
  out.rp = g.ordering.rp;
  std::vector<int> assignment(w.size(), -1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    // Weight still unpaid if witness i took plan p.
    auto missing = [&](int p) {
      long long m = 0;
      std::set<int> seen;
      for (auto key : entries[p]) {
        int node = g.plan_node[i].at(key);
        if (!in_cut[node]) m += g.nodes[node].capacity;
      }
      for (int inst : ix.occ[i][p]) {
        int node = g.instance_node[inst];
        if (node >= 0 && !in_cut[node] && seen.insert(node).second) m += g.nodes[node].capacity;
      }
      return m;
    };
    auto fully_cut = [&](int p) {
      for (auto key : entries[p])
        if (!in_cut[g.plan_node[i].at(key)]) return false;
      for (int inst : ix.occ[i][p]) {
        int node = g.instance_node[inst];
        if (node >= 0 && !in_cut[node]) return false;
      }
      return true;
    };
    for (int p : order)
      if (fully_cut(p)) {
        assignment[i] = p;
        break;
      }
    if (assignment[i] >= 0) continue;
    if (g.ordering.rp)
      throw ExtractionFailure("witness " + std::to_string(i + 1) + " has no fully cut plan");
    long long best = std::numeric_limits<long long>::max();
    for (int p : order) {
      long long m = missing(p);
      if (m < best) {
        best = m;
        assignment[i] = p;
      }
    }
    int p = assignment[i];
    for (auto key : entries[p]) in_cut[g.plan_node[i].at(key)] = true;
    for (int inst : ix.occ[i][p])
      if (g.instance_node[inst] >= 0) in_cut[g.instance_node[inst]] = true;
    ++out.repaired;
  }
  out.fact = assemble(q, d, w, ix.plans, assignment);
  return out;
}

FlowFactorization solve_flow(const Query& q, const Database& d, const WitnessSet& w, const Ordering& o,
                             bool strict) {
  auto g = build_flow_graph(q, d, w, o, strict);
  auto cut = min_cut(g);
  return extract_factorization(q, d, w, g, cut);
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

void write_dot(const FlowGraph& g, std::ostream& out, const MinCut* cut) {
  std::set<int> in_cut;
  if (cut) in_cut.insert(cut->nodes.begin(), cut->nodes.end());
  out << "digraph flow {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    out << "  n" << i << " [";
    switch (n.kind) {
      case FlowNode::Kind::Source:
      case FlowNode::Kind::Target:
        out << "label=\"" << n.label << "\", shape=doublecircle";
        break;
      case FlowNode::Kind::Connector:
        out << "label=\"\", shape=point";
        break;
      case FlowNode::Kind::Plan:
      case FlowNode::Kind::Prefix:
        out << "label=\"" << escape(n.label) << "\\n" << n.capacity << "\", shape="
            << (n.kind == FlowNode::Kind::Plan ? "box" : "ellipse");
        if (in_cut.count(static_cast<int>(i))) out << ", style=filled, fillcolor=lightcoral";
        break;
    }
    out << "];\n";
  }
  for (auto [u, v] : g.edges) out << "  n" << u << " -> n" << v << ";\n";
  out << "}\n";
}

}  // namespace provfact
