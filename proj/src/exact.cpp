#include "provfact/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace provfact {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> sorted_instances(const PlanIndex& ix, int w, int p) {
  std::vector<int> s = ix.occ[w][p];
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Plans of witness `w` that survive dominance. A plan whose instance set
// contains that of a lower-indexed plan is never needed; with `strict`, nor is
// one that strictly contains the set of any other plan.
std::vector<int> surviving_plans(const PlanIndex& ix, int w, bool strict) {
  const int k = static_cast<int>(ix.plan_count());
  std::vector<std::vector<int>> sets(k);
  for (int p = 0; p < k; ++p) sets[p] = sorted_instances(ix, w, p);
  std::vector<int> out;
  for (int p = 0; p < k; ++p) {
    bool dominated = false;
    for (int o = 0; o < k && !dominated; ++o) {
      if (o == p || !subset_of(sets[o], sets[p])) continue;
      dominated = o < p || (strict && sets[o].size() < sets[p].size());
    }
    if (!dominated) out.push_back(p);
  }
  return out;
}

struct Component {
  std::vector<int> witnesses;  // global ids, ascending
};

std::vector<Component> components(const PlanIndex& ix) {
  const int n = static_cast<int>(ix.witness_count());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> owner(ix.instances.size(), -1);
  for (int w = 0; w < n; ++w)
    for (const auto& plan : ix.occ[w])
      for (int i : plan) {
        if (owner[i] < 0) owner[i] = w;
        else parent[find(w)] = find(owner[i]);
      }
  std::vector<int> slot(n, -1);
  std::vector<Component> out;
  for (int w = 0; w < n; ++w) {
    int r = find(w);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].witnesses.push_back(w);
  }
  return out;
}

class Search {
 public:
  Search(const PlanIndex& ix, const std::vector<int>& witnesses, bool strict)
      : ix_(ix), witnesses_(witnesses) {
    const std::size_t n = witnesses.size();
    options_.resize(n);
    inst_.resize(n);
    touched_.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
      int w = witnesses[l];
      options_[l] = surviving_plans(ix, w, strict);
      std::set<int> all;
      for (int p : options_[l]) {
        inst_[l].push_back(sorted_instances(ix, w, p));
        all.insert(inst_[l].back().begin(), inst_[l].back().end());
      }
      touched_[l].assign(all.begin(), all.end());
    }
    used_.assign(ix.instances.size(), 0);
    mult_.assign(ix.instances.size(), 0);
    for (const auto& t : touched_)
      for (int i : t) ++mult_[i];
    choice_.assign(n, -1);
    assigned_.assign(n, false);
  }

  // Most constrained first: many shared candidates, attached to placed witnesses.
  std::vector<int> constrained_order() const {
    const std::size_t n = witnesses_.size();
    std::vector<int> shared(n, 0);
    for (std::size_t l = 0; l < n; ++l)
      for (int i : touched_[l])
        if (mult_[i] > 1) ++shared[l];
    std::vector<int> order;
    std::vector<bool> placed(n, false);
    std::vector<int> seen(ix_.instances.size(), 0);
    std::vector<int> link(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
      int best = -1;
      for (std::size_t l = 0; l < n; ++l) {
        if (placed[l]) continue;
        if (best < 0 || link[l] > link[best] || (link[l] == link[best] && shared[l] > shared[best]))
          best = static_cast<int>(l);
      }
      placed[best] = true;
      order.push_back(best);
      for (int i : touched_[best]) ++seen[i];
      for (std::size_t l = 0; l < n; ++l) {
        if (placed[l]) continue;
        link[l] = 0;
        for (int i : touched_[l])
          if (seen[i]) ++link[l];
      }
    }
    return order;
  }

  std::vector<int> natural_order() const {
    std::vector<int> order(witnesses_.size());
    std::iota(order.begin(), order.end(), 0);
    return order;
  }

  // Greedy then improvement moves; returns local option indices.
  std::vector<int> greedy(const std::vector<int>& order) {
    std::vector<int> pick(witnesses_.size(), -1);
    std::vector<int> count(ix_.instances.size(), 0);
    auto incremental = [&](int l, int o) {
      long long c = 0;
      for (int i : inst_[l][o])
        if (!count[i]) c += ix_.instance_weight[i];
      return c;
    };
    auto choose = [&](int l) {
      int best = 0;
      long long best_cost = incremental(l, 0);
      for (int o = 1; o < static_cast<int>(options_[l].size()); ++o) {
        long long c = incremental(l, o);
        if (c < best_cost) {
          best = o;
          best_cost = c;
        }
      }
      return best;
    };
    for (int l : order) {
      pick[l] = choose(l);
      for (int i : inst_[l][pick[l]]) ++count[i];
    }
    for (bool improved = true; improved;) {
      improved = false;
      for (int l : order) {
        for (int i : inst_[l][pick[l]]) --count[i];
        long long before = incremental(l, pick[l]);
        int o = choose(l);
        if (incremental(l, o) < before) {
          pick[l] = o;
          improved = true;
        }
        for (int i : inst_[l][pick[l]]) ++count[i];
      }
    }
    return pick;
  }

  long long cost_of(const std::vector<int>& pick) const {
    std::vector<bool> seen(ix_.instances.size(), false);
    long long c = 0;
    for (std::size_t l = 0; l < pick.size(); ++l)
      for (int i : inst_[l][pick[l]])
        if (!seen[i]) {
          seen[i] = true;
          c += ix_.instance_weight[i];
        }
    return c;
  }

  // Fractional bound: an unused instance's weight is split among the
  // remaining witnesses that could still use it.
  double bound() const {
    double b = static_cast<double>(cost_);
    for (std::size_t l = 0; l < witnesses_.size(); ++l) {
      if (assigned_[l]) continue;
      double best = INFINITY;
      for (const auto& set : inst_[l]) {
        double s = 0;
        for (int i : set)
          if (!used_[i]) s += static_cast<double>(ix_.instance_weight[i]) / mult_[i];
        best = std::min(best, s);
      }
      b += best;
    }
    return b;
  }

  static long long ceil_bound(double b) { return static_cast<long long>(std::ceil(b - 1e-7)); }

  // First assignment in natural order whose cost equals `target`.
  bool first_with_cost(long long target, std::vector<int>& pick, std::uint64_t budget,
                       std::optional<Clock::time_point> deadline = std::nullopt) {
    order_ = natural_order();
    budget_ = budget;
    deadline_ = deadline;
    nodes_ = 0;
    aborted_ = false;
    found_ = false;
    best_pick_ = &pick;
    best_cost_ = target;
    dfs(0);
    return found_;
  }

  std::uint64_t nodes() const { return nodes_; }
  int plan_of(int l, int o) const { return options_[l][o]; }

 private:
  void dfs(std::size_t depth) {
    if (aborted_ || found_) return;
    if (++nodes_ > budget_ || ((nodes_ & 1023) == 0 && deadline_ && Clock::now() > *deadline_)) {
      aborted_ = true;
      return;
    }
    if (depth == order_.size()) {
      if (cost_ == best_cost_) {
        *best_pick_ = choice_;
        found_ = true;
      }
      return;
    }
    if (ceil_bound(bound()) > best_cost_) return;

    int l = order_[depth];
    assigned_[l] = true;
    for (int i : touched_[l]) --mult_[i];
    for (int o = 0; o < static_cast<int>(options_[l].size()); ++o) {
      long long added = 0;
      for (int i : inst_[l][o])
        if (used_[i]++ == 0) added += ix_.instance_weight[i];
      cost_ += added;
      choice_[l] = o;
      dfs(depth + 1);
      cost_ -= added;
      for (int i : inst_[l][o]) --used_[i];
      if (aborted_ || found_) break;
    }
    choice_[l] = -1;
    for (int i : touched_[l]) ++mult_[i];
    assigned_[l] = false;
  }

  const PlanIndex& ix_;
  std::vector<int> witnesses_;
  std::vector<std::vector<int>> options_;
  std::vector<std::vector<std::vector<int>>> inst_;
  std::vector<std::vector<int>> touched_;
  std::vector<int> used_;
  std::vector<int> mult_;
  std::vector<int> choice_;
  std::vector<bool> assigned_;
  long long cost_ = 0;

  std::vector<int> order_;
  std::uint64_t budget_ = 0;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  bool found_ = false;
  std::vector<int>* best_pick_ = nullptr;
  long long best_cost_ = 0;
};

// Branches on whether each shared prefix instance is paid for, resolving a
// witness once its cheapest remaining plan needs no undecided instance, and
// splitting the unresolved witnesses into independent groups after every
// decision.
class SharedSearch {
 public:
  SharedSearch(const PlanIndex& ix, const std::vector<int>& witnesses) {
    const int n = static_cast<int>(witnesses.size());
    std::vector<std::vector<std::vector<int>>> sets(n);
    std::vector<int> mult(ix.instances.size(), 0);
    for (int l = 0; l < n; ++l) {
      std::set<int> touched;
      for (int p : surviving_plans(ix, witnesses[l], true)) {
        plans_.resize(n);
        plans_[l].push_back(p);
        sets[l].push_back(sorted_instances(ix, witnesses[l], p));
        touched.insert(sets[l].back().begin(), sets[l].back().end());
      }
      for (int i : touched) ++mult[i];
    }
    plans_.resize(n);
    std::vector<int> local(ix.instances.size(), -1);
    shared_.resize(n);
    priv_.resize(n);
    for (int l = 0; l < n; ++l) {
      std::vector<std::vector<int>> shared(sets[l].size());
      std::vector<long long> priv(sets[l].size(), 0);
      for (std::size_t o = 0; o < sets[l].size(); ++o)
        for (int i : sets[l][o]) {
          if (mult[i] < 2) {
            priv[o] += ix.instance_weight[i];
            continue;
          }
          if (local[i] < 0) {
            local[i] = static_cast<int>(weight_.size());
            weight_.push_back(ix.instance_weight[i]);
          }
          shared[o].push_back(local[i]);
        }
      for (auto& s : shared) std::sort(s.begin(), s.end());
      // Drop plans needing a superset of another plan's shared instances at
      // no smaller private cost.
      std::vector<int> keep_plans;
      for (std::size_t o = 0; o < shared.size(); ++o) {
        bool dominated = false;
        for (std::size_t a = 0; a < shared.size() && !dominated; ++a) {
          if (a == o || !subset_of(shared[a], shared[o]) || priv[a] > priv[o]) continue;
          dominated = shared[a] != shared[o] || priv[a] < priv[o] || a < o;
        }
        if (dominated) continue;
        keep_plans.push_back(plans_[l][o]);
        shared_[l].push_back(shared[o]);
        priv_[l].push_back(priv[o]);
      }
      plans_[l] = std::move(keep_plans);
    }
    status_.assign(weight_.size(), kOpen);
    pick_.assign(n, 0);
    degree_.assign(weight_.size(), 0);
    mark_.assign(weight_.size(), -1);
  }

  // Optimum below `limit`, or a value >= `limit` if there is none.
  long long run(long long limit, std::uint64_t budget, std::optional<Clock::time_point> deadline) {
    budget_ = budget;
    deadline_ = deadline;
    std::vector<int> all(pick_.size());
    std::iota(all.begin(), all.end(), 0);
    return solve(all, limit);
  }

  bool aborted() const { return aborted_; }
  std::uint64_t nodes() const { return nodes_; }
  int plan(int l) const { return plans_[l][pick_[l]]; }

  // Bound over all witnesses with nothing decided.
  double root_bound() {
    std::vector<int> all(pick_.size());
    std::iota(all.begin(), all.end(), 0);
    return bound(all);
  }

 private:
  static constexpr int kOpen = 0, kPaid = 1, kBanned = 2;

  bool feasible(int l, int o) const {
    for (int s : shared_[l][o])
      if (status_[s] == kBanned) return false;
    return true;
  }

  bool ready(int l, int o) const {
    for (int s : shared_[l][o])
      if (status_[s] == kOpen) return false;
    return true;
  }

  // Fractional bound: open instances split among the witnesses that may use them.
  double bound(const std::vector<int>& group) {
    for (int l : group)
      for (std::size_t o = 0; o < shared_[l].size(); ++o)
        if (feasible(l, static_cast<int>(o)))
          for (int s : shared_[l][o])
            if (status_[s] == kOpen && mark_[s] != l) {
              mark_[s] = l;
              ++degree_[s];
            }
    double total = 0;
    for (int l : group) {
      double best = INFINITY;
      for (std::size_t o = 0; o < shared_[l].size(); ++o) {
        if (!feasible(l, static_cast<int>(o))) continue;
        double c = static_cast<double>(priv_[l][o]);
        for (int s : shared_[l][o])
          if (status_[s] == kOpen) c += static_cast<double>(weight_[s]) / degree_[s];
        best = std::min(best, c);
      }
      total += best;
    }
    for (int l : group)
      for (const auto& set : shared_[l])
        for (int s : set) {
          degree_[s] = 0;
          mark_[s] = -1;
        }
    return total;
  }

  long long solve(const std::vector<int>& group, long long limit) {
    if (aborted_) return limit;
    if (++nodes_ > budget_ || ((nodes_ & 1023) == 0 && deadline_ && Clock::now() > *deadline_)) {
      aborted_ = true;
      return limit;
    }
    // Resolve witnesses whose cheapest plan needs no open instance.
    long long resolved = 0;
    std::vector<int> open;
    for (int l : group) {
      long long best_any = -1, best_ready = -1;
      int ready_plan = -1;
      for (std::size_t o = 0; o < shared_[l].size(); ++o) {
        int oi = static_cast<int>(o);
        if (!feasible(l, oi)) continue;
        if (best_any < 0 || priv_[l][o] < best_any) best_any = priv_[l][o];
        if (ready(l, oi) && (best_ready < 0 || priv_[l][o] < best_ready)) {
          best_ready = priv_[l][o];
          ready_plan = oi;
        }
      }
      if (best_any < 0) return limit;
      if (best_ready >= 0 && best_ready <= best_any) {
        pick_[l] = ready_plan;
        resolved += best_ready;
      } else {
        open.push_back(l);
      }
    }
    if (resolved >= limit) return limit;
    if (open.empty()) return resolved;

    auto groups = split(open);
    if (groups.size() > 1) {
      std::vector<long long> lb;
      long long rest = 0;
      for (const auto& g : groups) {
        lb.push_back(ceil_bound(bound(g)));
        rest += lb.back();
      }
      long long total = resolved;
      for (std::size_t k = 0; k < groups.size(); ++k) {
        rest -= lb[k];
        long long sub_limit = limit - total - rest;
        if (sub_limit <= lb[k]) return limit;
        long long v = solve(groups[k], sub_limit);
        if (v >= sub_limit) return limit;
        total += v;
      }
      return total;
    }

    if (resolved + ceil_bound(bound(open)) >= limit) return limit;
    int s = branch_instance(open);
    long long best = limit;
    std::vector<int> best_pick;
    for (int state : {kPaid, kBanned}) {
      long long extra = resolved + (state == kPaid ? weight_[s] : 0);
      if (extra >= best) continue;
      status_[s] = state;
      long long v = solve(open, best - extra);
      status_[s] = kOpen;
      if (v < best - extra) {
        best = v + extra;
        best_pick.clear();
        for (int l : open) best_pick.push_back(pick_[l]);
      }
      if (aborted_) break;
    }
    if (best < limit)
      for (std::size_t k = 0; k < open.size(); ++k) pick_[open[k]] = best_pick[k];
    return best;
  }

  // Connected groups of witnesses sharing an open instance.
  std::vector<std::vector<int>> split(const std::vector<int>& open) {
    std::vector<int> parent(open.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t k = 0; k < open.size(); ++k) {
      int l = open[k];
      for (std::size_t o = 0; o < shared_[l].size(); ++o) {
        if (!feasible(l, static_cast<int>(o))) continue;
        for (int s : shared_[l][o]) {
          if (status_[s] != kOpen) continue;
          if (mark_[s] < 0)
            mark_[s] = static_cast<int>(k);
          else
            parent[find(static_cast<int>(k))] = find(mark_[s]);
        }
      }
    }
    for (int l : open)
      for (const auto& set : shared_[l])
        for (int s : set) mark_[s] = -1;
    std::vector<std::vector<int>> out;
    std::vector<int> slot(open.size(), -1);
    for (std::size_t k = 0; k < open.size(); ++k) {
      int r = find(static_cast<int>(k));
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[slot[r]].push_back(open[k]);
    }
    return out;
  }

  // Open instance usable by the most witnesses; lowest id on ties.
  int branch_instance(const std::vector<int>& open) {
    std::vector<int> seen;
    for (int l : open)
      for (std::size_t o = 0; o < shared_[l].size(); ++o)
        if (feasible(l, static_cast<int>(o)))
          for (int s : shared_[l][o])
            if (status_[s] == kOpen && mark_[s] != l) {
              if (degree_[s] == 0) seen.push_back(s);
              mark_[s] = l;
              ++degree_[s];
            }
    int best = -1;
    for (int s : seen)
      if (best < 0 || degree_[s] > degree_[best] || (degree_[s] == degree_[best] && s < best)) best = s;
    for (int s : seen) {
      degree_[s] = 0;
      mark_[s] = -1;
    }
    return best;
  }

  static long long ceil_bound(double b) { return static_cast<long long>(std::ceil(b - 1e-7)); }

  std::vector<std::vector<int>> plans_;
  std::vector<std::vector<std::vector<int>>> shared_;
  std::vector<std::vector<long long>> priv_;
  std::vector<long long> weight_;
  std::vector<int> status_;
  std::vector<int> pick_;
  std::vector<int> degree_;
  std::vector<int> mark_;
  std::uint64_t budget_ = 0;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

long long lower_bound(const PlanIndex& ix, const std::vector<int>& witnesses, VarSet all_vars) {
  auto binds_all = [&](int inst) {
    VarSet s = 0;
    for (VarSet part : ix.instances[inst].path) s |= part;
    return s == all_vars;
  };
  std::set<int> forced;
  for (int w : witnesses) {
    if (ix.plan_count() == 0) break;
    auto common = sorted_instances(ix, w, 0);
    for (std::size_t p = 1; p < ix.plan_count(); ++p) {
      auto s = sorted_instances(ix, w, static_cast<int>(p));
      std::vector<int> keep;
      std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::back_inserter(keep));
      common = std::move(keep);
    }
    forced.insert(common.begin(), common.end());
  }
  long long total = 0;
  for (int i : forced) total += ix.instance_weight[i];
  for (int w : witnesses) {
    long long best = -1;
    for (std::size_t p = 0; p < ix.plan_count(); ++p) {
      long long c = 0;
      for (int i : sorted_instances(ix, w, static_cast<int>(p)))
        if (!forced.count(i) && binds_all(i)) c += ix.instance_weight[i];
      if (best < 0 || c < best) best = c;
    }
    total += std::max(best, 0LL);
  }
  return total;
}

std::vector<int> greedy_assignment(const PlanIndex& ix) {
  std::vector<int> out(ix.witness_count(), 0);
  for (const auto& comp : components(ix)) {
    Search s(ix, comp.witnesses, false);
    auto pick = s.greedy(s.natural_order());
    for (std::size_t l = 0; l < pick.size(); ++l) out[comp.witnesses[l]] = s.plan_of(static_cast<int>(l), pick[l]);
  }
  return out;
}

ExactResult solve_exact(const PlanIndex& ix, const ExactOptions& opts) {
  ExactResult r;
  r.assignment.assign(ix.witness_count(), 0);
  if (ix.witness_count() == 0) return r;
  VarSet all_vars = 0;
  for (const auto& p : ix.plans)
    for (const auto& n : p.nodes()) all_vars |= n.vars;

  struct Solved {
    std::vector<int> witnesses;
    long long cost;
    std::uint64_t nodes;
  };
  std::vector<Solved> exact;
  for (const auto& comp : components(ix)) {
    Search s(ix, comp.witnesses, true);
    auto pick = s.greedy(s.constrained_order());
    long long best = s.cost_of(pick);
    for (std::size_t l = 0; l < pick.size(); ++l)
      r.assignment[comp.witnesses[l]] = s.plan_of(static_cast<int>(l), pick[l]);

    SharedSearch shared(ix, comp.witnesses);
    const double root = shared.root_bound();
    std::uint64_t left = opts.node_budget > r.nodes ? opts.node_budget - r.nodes : 0;
    std::uint64_t nodes = 0;
    bool done = Search::ceil_bound(root) >= best;
    if (!done) {
      long long v = shared.run(best, left, opts.deadline);
      nodes = shared.nodes();
      if (v < best) {
        best = v;
        for (std::size_t l = 0; l < pick.size(); ++l) r.assignment[comp.witnesses[l]] = shared.plan(static_cast<int>(l));
      }
      done = !shared.aborted();
    }
    r.nodes += nodes;
    r.cost += best;
    if (done) {
      r.lower_bound += best;
      exact.push_back({comp.witnesses, best, nodes});
    } else {
      r.optimal = false;
      long long lb = std::max(Search::ceil_bound(root), lower_bound(ix, comp.witnesses, all_vars));
      r.lower_bound += std::min(lb, best);
    }
  }

  if (opts.tie_break) {
    for (const auto& c : exact) {
      Search s(ix, c.witnesses, false);
      std::vector<int> pick(c.witnesses.size(), 0);
      std::uint64_t left = opts.node_budget > r.nodes ? opts.node_budget - r.nodes : 0;
      std::uint64_t cap = std::min<std::uint64_t>(left, 10 * c.nodes + 100'000);
      bool found = s.first_with_cost(c.cost, pick, cap, opts.deadline);
      r.nodes += s.nodes();
      if (found)
        for (std::size_t l = 0; l < pick.size(); ++l)
          r.assignment[c.witnesses[l]] = s.plan_of(static_cast<int>(l), pick[l]);
    }
  }
  return r;
}

ExactFactorization solve_exact(const Query& q, const Database& d, const WitnessSet& w,
                               const ExactOptions& opts) {
  auto plans = enumerate_mveo(q);
  auto ix = build_plan_index(q, w, plans);
  ExactFactorization out;
  out.search = solve_exact(ix, opts);
  out.fact = assemble(q, d, w, ix.plans, out.search.assignment);
  return out;
}

}  // namespace provfact
