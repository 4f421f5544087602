#include "provfact/instances.hpp"

#include <algorithm>
#include <map>

#include "provfact/error.hpp"

namespace provfact {

PrefixInstance instantiate(const std::vector<VarSet>& path, const std::vector<int>& binding) {
  PrefixInstance p;
  p.path = path;
  for (VarSet s : path)
    for (VarSet rest = s; rest; rest &= rest - 1) {
      int v = __builtin_ctz(rest);
      if (v >= static_cast<int>(binding.size()) || binding[v] < 0)
        throw UnboundVariable("witness does not bind variable #" + std::to_string(v));
      p.values.push_back(binding[v]);
    }
  return p;
}

PrefixInstance instantiate(const Veo& v, int node, const std::vector<int>& binding) {
  return instantiate(v.path_to(node), binding);
}

std::string instance_key(const PrefixInstance& p) {
  std::string key;
  key.reserve((p.path.size() + p.values.size() + 1) * 4);
  auto put = [&](std::uint32_t x) { key.append(reinterpret_cast<const char*>(&x), sizeof x); };
  put(static_cast<std::uint32_t>(p.path.size()));
  for (VarSet s : p.path) put(s);
  for (int v : p.values) put(static_cast<std::uint32_t>(v));
  return key;
}

std::string render_instance(const Query& q, const Database& d, const PrefixInstance& p) {
  std::string out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.path.size(); ++i) {
    if (i) out += " <- ";
    VarSet s = p.path[i];
    std::map<int, int> value_of;
    for (VarSet rest = s; rest; rest &= rest - 1) value_of[__builtin_ctz(rest)] = p.values[k++];
    std::string text;
    for (int v : node_order(q, s)) {
      const auto& c = d.constant(value_of[v]);
      text += q.var_name(v);
      text += c.size() == 1 ? c : ":" + c;
    }
    out += popcount(s) == 1 ? text : "(" + text + ")";
  }
  return out;
}

long long PlanIndex::cost(const std::vector<int>& assignment) const {
  std::vector<bool> used(instances.size(), false);
  long long total = 0;
  for (std::size_t w = 0; w < assignment.size(); ++w)
    for (int inst : occ[w][assignment[w]])
      if (!used[inst]) {
        used[inst] = true;
        total += instance_weight[inst];
      }
  return total;
}

PlanIndex build_plan_index(const Query& q, const WitnessSet& w, std::vector<Veo> plans) {
  PlanIndex ix;
  ix.plans = std::move(plans);
  std::map<std::vector<VarSet>, int> path_ids;
  for (std::size_t p = 0; p < ix.plans.size(); ++p) {
    ix.prefixes.push_back(table_prefixes(ix.plans[p], q));
    std::vector<int> ids;
    for (const auto& tp : ix.prefixes.back()) {
      auto [it, fresh] = path_ids.emplace(tp.path, static_cast<int>(ix.paths.size()));
      if (fresh) {
        ix.paths.push_back(tp.path);
        ix.path_weight.push_back(tp.weight);
        ix.path_plans.emplace_back();
      }
      ix.path_plans[it->second].push_back(static_cast<int>(p));
      ids.push_back(it->second);
    }
    ix.prefix_path.push_back(std::move(ids));
  }
  std::unordered_map<std::string, int> interned;
  ix.occ.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    ix.occ[i].resize(ix.plans.size());
    for (std::size_t p = 0; p < ix.plans.size(); ++p) {
      for (std::size_t k = 0; k < ix.prefixes[p].size(); ++k) {
        auto inst = instantiate(ix.prefixes[p][k].path, w[i].binding);
        auto key = instance_key(inst);
        auto [it, fresh] = interned.emplace(std::move(key), static_cast<int>(ix.instances.size()));
        if (fresh) {
          ix.instances.push_back(std::move(inst));
          ix.instance_weight.push_back(ix.prefixes[p][k].weight);
          ix.instance_path.push_back(ix.prefix_path[p][k]);
        }
        ix.occ[i][p].push_back(it->second);
      }
    }
  }
  return ix;
}

}  // namespace provfact
