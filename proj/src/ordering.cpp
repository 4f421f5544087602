#include "provfact/ordering.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "provfact/error.hpp"

namespace provfact {

namespace {

std::vector<std::string> sorted_names(const Query& q, VarSet s) {
  auto names = var_names(q, s);
  std::sort(names.begin(), names.end());
  return names;
}

class NestedBuilder {
 public:
  NestedBuilder(const Query& q, Ordering& out) : q_(q), out_(out) {}

  int build(const std::vector<int>& members, const std::vector<int>& node_of, bool in_product) {
    auto saved = base_;
    base_ = node_of;
    int id = static_cast<int>(out_.lists.size());
    out_.lists.emplace_back();
    auto entries = order(members, node_of, in_product);
    base_ = std::move(saved);
    out_.lists[id].entries = std::move(entries);
    return id;
  }

 private:
  const Veo& plan(int p) const { return out_.plans[p]; }

  // Path from the start of the current list down to `node`, exclusive.
  std::string path_from_base(int p, int node) const {
    auto full = plan(p).path_to(node);
    auto skip = static_cast<std::size_t>(plan(p).depth(base_[p]));
    std::vector<VarSet> part(full.begin() + static_cast<std::ptrdiff_t>(skip), full.end() - 1);
    return part.empty() ? "" : render_path(q_, part) + " <- ";
  }

  OrderingEntry leaf(std::vector<int> cover, int node, bool in_product) const {
    std::sort(cover.begin(), cover.end());
    OrderingEntry e;
    if (!in_product && cover.size() == 1) {
      e.kind = OrderingEntry::Kind::Plan;
      e.plan = cover[0];
      e.label = plan(cover[0]).str();
    } else {
      e.kind = OrderingEntry::Kind::SubPlan;
      e.label = path_from_base(cover[0], node) + plan(cover[0]).subtree_str(node);
    }
    e.cover = std::move(cover);
    return e;
  }

  // Children of `node` in plan `p`, keyed by their subtree variables.
  std::map<VarSet, int> children_by_vars(int p, int node) const {
    std::map<VarSet, int> out;
    for (int c : plan(p).node(node).children) out.emplace(plan(p).subtree_vars(c), c);
    return out;
  }

  std::vector<OrderingEntry> order(const std::vector<int>& members, const std::vector<int>& node_of,
                                   bool in_product) {
    const std::string& first = plan(members[0]).subtree_str(node_of[members[0]]);
    bool uniform = std::all_of(members.begin(), members.end(), [&](int m) {
      return plan(m).subtree_str(node_of[m]) == first;
    });
    if (uniform) return {leaf(members, node_of[members[0]], in_product)};

    // Group by node variables, then by the variable sets of the child subtrees.
    using Signature = std::vector<std::vector<std::string>>;
    std::map<std::vector<std::string>, std::map<Signature, std::vector<int>>> groups;
    for (int m : members) {
      const auto& n = plan(m).node(node_of[m]);
      Signature sig;
      for (int c : n.children) sig.push_back(sorted_names(q_, plan(m).subtree_vars(c)));
      std::sort(sig.begin(), sig.end());
      groups[sorted_names(q_, n.vars)][sig].push_back(m);
    }

    std::vector<OrderingEntry> out;
    for (auto& [names, by_sig] : groups) {
      for (auto& [sig, group] : by_sig) {
        const std::string& head = plan(group[0]).subtree_str(node_of[group[0]]);
        bool same = std::all_of(group.begin(), group.end(), [&](int m) {
          return plan(m).subtree_str(node_of[m]) == head;
        });
        if (sig.empty() || same) {
          out.push_back(leaf(group, node_of[group[0]], in_product));
        } else if (sig.size() == 1) {
          std::vector<int> next = node_of;
          for (int m : group) next[m] = plan(m).node(node_of[m]).children[0];
          auto sub = order(group, next, in_product);
          out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
        } else {
          auto sub = product(group, node_of, in_product);
          out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
        }
      }
    }
    return out;
  }

  std::vector<OrderingEntry> product(const std::vector<int>& group, const std::vector<int>& node_of,
                                     bool in_product) {
    // Components in the order of the (shared) child subtree variable sets.
    std::vector<VarSet> comps;
    for (auto& [vars, c] : children_by_vars(group[0], node_of[group[0]])) comps.push_back(vars);
    std::sort(comps.begin(), comps.end(), [&](VarSet a, VarSet b) {
      return sorted_names(q_, a) < sorted_names(q_, b);
    });
    std::vector<std::set<std::string>> distinct(comps.size());
    std::set<std::vector<std::string>> tuples;
    std::vector<std::vector<int>> child_of(comps.size(), std::vector<int>(node_of.size(), -1));
    for (int m : group) {
      auto kids = children_by_vars(m, node_of[m]);
      std::vector<std::string> tuple;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        int c = kids.at(comps[i]);
        child_of[i][m] = c;
        tuple.push_back(plan(m).subtree_str(c));
        distinct[i].insert(tuple.back());
      }
      tuples.insert(std::move(tuple));
    }
    std::size_t cartesian = 1;
    for (const auto& d : distinct) cartesian *= d.size();
    if (cartesian != tuples.size()) {
      // Not a product of independent choices: one leaf per distinct subtree.
      std::map<std::string, std::vector<int>> by_subtree;
      for (int m : group) by_subtree[plan(m).subtree_str(node_of[m])].push_back(m);
      std::vector<OrderingEntry> out;
      for (auto& [s, cover] : by_subtree) out.push_back(leaf(cover, node_of[cover[0]], in_product));
      return out;
    }
    OrderingEntry e;
    e.kind = OrderingEntry::Kind::Product;
    e.cover = group;
    std::sort(e.cover.begin(), e.cover.end());
    int node = node_of[group[0]];
    e.context = path_from_base(group[0], node) + render_node(q_, plan(group[0]).node(node).vars);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::vector<int> next = node_of;
      for (int m : group) next[m] = child_of[i][m];
      e.parallel.push_back(build(group, next, true));
    }
    return {std::move(e)};
  }

  const Query& q_;
  Ordering& out_;
  std::vector<int> base_;
};

// Sort key of a plan within a list: entry index, then keys inside products.
void plan_key(const Ordering& o, int list, int p, std::vector<int>& key) {
  const auto& entries = o.lists[list].entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!std::binary_search(e.cover.begin(), e.cover.end(), p)) continue;
    key.push_back(static_cast<int>(i));
    for (int sub : e.parallel) plan_key(o, sub, p, key);
    return;
  }
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

std::optional<Span> locate_in(const Ordering& o, int list, const std::vector<int>& plan_set) {
  const auto& entries = o.lists[list].entries;
  std::vector<int> hit;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (intersects(entries[i].cover, plan_set)) hit.push_back(static_cast<int>(i));
  if (hit.empty()) return std::nullopt;
  bool contiguous = hit.back() - hit.front() + 1 == static_cast<int>(hit.size());
  if (contiguous) {
    std::vector<int> covered;
    for (int i : hit) covered.insert(covered.end(), entries[i].cover.begin(), entries[i].cover.end());
    std::sort(covered.begin(), covered.end());
    if (covered == plan_set) return Span{list, hit.front(), hit.back()};
  }
  if (hit.size() == 1 && entries[hit[0]].kind == OrderingEntry::Kind::Product)
    for (int sub : entries[hit[0]].parallel)
      if (auto s = locate_in(o, sub, plan_set)) return s;
  return std::nullopt;
}

std::string render_list(const Ordering& o, int list, bool ascii) {
  std::string out;
  const auto& entries = o.lists[list].entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    const auto& e = entries[i];
    if (e.kind != OrderingEntry::Kind::Product) {
      out += e.label;
      continue;
    }
    out += e.context + " <- (";
    for (std::size_t k = 0; k < e.parallel.size(); ++k) {
      if (k) out += ascii ? " * " : " × ";
      out += "(" + render_list(o, e.parallel[k], ascii) + ")";
    }
    out += ")";
  }
  return out;
}

std::map<std::vector<VarSet>, std::vector<int>> prefix_plan_sets(const Ordering& o, const Query& q) {
  std::map<std::vector<VarSet>, std::vector<int>> out;
  for (std::size_t p = 0; p < o.plans.size(); ++p)
    for (const auto& tp : table_prefixes(o.plans[p], q)) out[tp.path].push_back(static_cast<int>(p));
  return out;
}

}  // namespace

std::vector<int> Ordering::flatten() const {
  std::vector<std::pair<std::vector<int>, int>> keyed;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    std::vector<int> key;
    plan_key(*this, 0, static_cast<int>(p), key);
    keyed.emplace_back(std::move(key), static_cast<int>(p));
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (auto& [k, p] : keyed) out.push_back(p);
  return out;
}

std::string Ordering::to_string(bool ascii) const { return "[" + render_list(*this, 0, ascii) + "]"; }

std::optional<Span> Ordering::locate(const std::vector<int>& plan_set) const {
  if (lists.empty() || plan_set.empty()) return std::nullopt;
  return locate_in(*this, 0, plan_set);
}

Span Ordering::fallback_span(const std::vector<int>& plan_set) const {
  const auto& entries = lists.at(0).entries;
  Span s{0, -1, -1};
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (intersects(entries[i].cover, plan_set)) {
      if (s.first < 0) s.first = static_cast<int>(i);
      s.last = static_cast<int>(i);
    }
  return s;
}

bool check_rp(const Ordering& o, const Query& q) {
  for (const auto& [path, plan_set] : prefix_plan_sets(o, q))
    if (!o.locate(plan_set)) return false;
  return true;
}

Ordering build_ordering(const Query& q, std::vector<Veo> plans) {
  Ordering o;
  o.plans = std::move(plans);
  o.nested = true;
  if (o.plans.empty()) {
    o.lists.emplace_back();
    o.rp = true;
    return o;
  }
  std::vector<int> members(o.plans.size());
  for (std::size_t i = 0; i < members.size(); ++i) members[i] = static_cast<int>(i);
  NestedBuilder(q, o).build(members, std::vector<int>(o.plans.size(), 0), false);
  o.rp = check_rp(o, q);
  return o;
}

Ordering build_flat_ordering(const Query& q, std::vector<Veo> plans, const std::vector<int>& perm) {
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  bool valid = sorted.size() == plans.size();
  for (std::size_t i = 0; valid && i < sorted.size(); ++i) valid = sorted[i] == static_cast<int>(i);
  if (!valid)
    throw InvalidPermutation("ordering must list each of the " + std::to_string(plans.size()) +
                             " plans exactly once");
  Ordering o;
  o.plans = std::move(plans);
  o.lists.emplace_back();
  for (int p : perm) {
    OrderingEntry e;
    e.kind = OrderingEntry::Kind::Plan;
    e.plan = p;
    e.label = o.plans[p].str();
    e.cover = {p};
    o.lists[0].entries.push_back(std::move(e));
  }
  o.rp = check_rp(o, q);
  return o;
}

Ordering ordering_from_spec(const Query& q, std::vector<Veo> plans, std::string_view spec) {
  if (spec == "nested-rp" || spec == "nested") return build_ordering(q, std::move(plans));
  if (spec == "flat") {
    std::vector<int> perm(plans.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    return build_flat_ordering(q, std::move(plans), perm);
  }
  if (spec.substr(0, 5) != "flat:")
    throw InvalidPermutation("unknown ordering '" + std::string(spec) + "'");
  std::vector<int> perm;
  std::string_view rest = spec.substr(5);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    auto item = rest.substr(0, comma);
    if (!item.empty() && (item[0] == 'v' || item[0] == 'V')) item.remove_prefix(1);
    int n = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
    if (ec != std::errc() || ptr != item.data() + item.size() || n < 1)
      throw InvalidPermutation("bad plan number '" + std::string(item) + "' in ordering");
    perm.push_back(n - 1);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return build_flat_ordering(q, std::move(plans), perm);
}

}  // namespace provfact
