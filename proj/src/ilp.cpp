#include "provfact/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "provfact/error.hpp"

namespace provfact {

namespace {

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
  return out;
}

// `y1_z2__x0` for the instance (yz) <- x with y=1, z=2, x=0.
std::string instance_text(const Query& q, const Database& d, const PrefixInstance& p) {
  std::string out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.path.size(); ++i) {
    if (i) out += "__";
    std::map<int, int> value_of;
    for (VarSet rest = p.path[i]; rest; rest &= rest - 1) value_of[__builtin_ctz(rest)] = p.values[k++];
    bool first = true;
    for (int v : node_order(q, p.path[i])) {
      if (!first) out += '_';
      first = false;
      out += q.var_name(v) + sanitize(d.constant(value_of[v]));
    }
  }
  return out;
}

std::string binding_text(const Query& q, const Database& d, const Witness& w) {
  std::string out;
  for (std::size_t v = 0; v < w.binding.size(); ++v) {
    if (v) out += '_';
    out += q.var_name(static_cast<int>(v)) + sanitize(d.constant(w.binding[v]));
  }
  return out;
}

class Namer {
 public:
  std::string operator()(const std::string& base) {
    int& n = seen_[base];
    ++n;
    if (n == 1 && !taken_.count(base)) {
      taken_.insert(base);
      return base;
    }
    for (;; ++n) {
      std::string candidate = base + "_" + std::to_string(n);
      if (taken_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::unordered_map<std::string, int> seen_;
  std::set<std::string> taken_;
};

VarSet path_vars(const std::vector<VarSet>& path) {
  VarSet s = 0;
  for (VarSet part : path) s |= part;
  return s;
}

}  // namespace

IlpModel build_ilp(const Query& q, const Database& d, const WitnessSet& w, const IlpOptions& opts) {
  if (w.empty()) throw EmptyWitnessSet("cannot build a model without witnesses");
  auto ix = build_plan_index(q, w, enumerate_mveo(q));
  IlpModel model;
  model.query = q.to_string();
  model.n = w.size();
  model.k = ix.plan_count();
  model.m = q.atom_count();
  Namer namer;

  // Prefixes binding every variable, when each plan weighs them equally.
  std::vector<bool> folded_path(ix.paths.size(), false);
  if (opts.reduce) {
    std::vector<long long> full_weight(ix.plan_count(), 0);
    for (std::size_t p = 0; p < ix.plan_count(); ++p)
      for (std::size_t t = 0; t < ix.prefixes[p].size(); ++t)
        if (path_vars(ix.prefixes[p][t].path) == q.all_vars()) full_weight[p] += ix.prefixes[p][t].weight;
    bool uniform = std::adjacent_find(full_weight.begin(), full_weight.end(),
                                      std::not_equal_to<>()) == full_weight.end();
    if (uniform && full_weight[0] > 0) {
      for (std::size_t path = 0; path < ix.paths.size(); ++path)
        folded_path[path] = path_vars(ix.paths[path]) == q.all_vars();
      model.constant = full_weight[0] * static_cast<long long>(w.size());
    }
  }

  // Chain plans identified by their two-node prefix.
  bool shorthand = false;
  if (opts.reduce) {
    shorthand = true;
    std::set<std::vector<VarSet>> heads;
    for (std::size_t p = 0; p < ix.plan_count() && shorthand; ++p) {
      const Veo& v = ix.plans[p];
      shorthand = v.is_chain() && v.size() >= 2;
      if (!shorthand) break;
      shorthand = heads.insert(v.path_to(1)).second;
      for (std::size_t t = 0; t < ix.prefixes[p].size() && shorthand; ++t)
        if (!folded_path[ix.prefix_path[p][t]] && ix.prefixes[p][t].path.size() > 2) shorthand = false;
    }
  }
  model.reduced = opts.reduce;

  std::vector<int> prefix_var(ix.instances.size(), -1);
  std::unordered_map<std::string, int> head_var;
  auto add_var = [&](IlpVar v) {
    model.vars.push_back(std::move(v));
    return static_cast<int>(model.vars.size()) - 1;
  };
  auto ensure_prefix = [&](int inst) {
    if (prefix_var[inst] < 0) {
      IlpVar v;
      v.kind = IlpVar::Kind::Prefix;
      v.instance = inst;
      v.name = namer("p_" + instance_text(q, d, ix.instances[inst]));
      prefix_var[inst] = add_var(std::move(v));
    }
    return prefix_var[inst];
  };

  std::set<std::pair<int, int>> implications;
  for (std::size_t i = 0; i < w.size(); ++i) {
    IlpConstraint plan_con;
    plan_con.kind = IlpConstraint::Kind::Plan;
    plan_con.name = "plan_w" + std::to_string(i + 1);
    plan_con.rhs = 1;
    std::vector<int> qvars;
    for (std::size_t p = 0; p < ix.plan_count(); ++p) {
      int qv;
      int head_inst = -1;
      if (shorthand) {
        auto head = instantiate(ix.plans[p], 1, w[i].binding);
        auto key = instance_key(head);
        for (std::size_t t = 0; t < ix.prefixes[p].size(); ++t)
          if (ix.prefixes[p][t].node == 1 && !folded_path[ix.prefix_path[p][t]]) head_inst = ix.occ[i][p][t];
        auto it = head_var.find(key);
        if (it != head_var.end()) {
          qv = it->second;
        } else {
          IlpVar v;
          v.kind = IlpVar::Kind::Plan;
          v.plan = static_cast<int>(p);
          v.witness = static_cast<int>(i);
          v.instance = head_inst;
          v.name = namer("q_" + instance_text(q, d, head));
          qv = add_var(std::move(v));
          head_var.emplace(key, qv);
          if (head_inst >= 0) prefix_var[head_inst] = qv;
        }
        if (model.vars[qv].witness != static_cast<int>(i)) model.vars[qv].witness = -1;
      } else {
        IlpVar v;
        v.kind = IlpVar::Kind::Plan;
        v.plan = static_cast<int>(p);
        v.witness = static_cast<int>(i);
        v.name = namer("q_v" + std::to_string(p + 1) + "__" + binding_text(q, d, w[i]));
        qv = add_var(std::move(v));
      }
      qvars.push_back(qv);
      plan_con.terms.push_back({qv, 1});
    }
    model.constraints.push_back(std::move(plan_con));
    for (std::size_t p = 0; p < ix.plan_count(); ++p) {
      for (std::size_t t = 0; t < ix.prefixes[p].size(); ++t) {
        if (folded_path[ix.prefix_path[p][t]]) continue;
        int inst = ix.occ[i][p][t];
        int pv = ensure_prefix(inst);
        if (pv == qvars[p]) continue;
        if (shorthand && !implications.insert({pv, qvars[p]}).second) continue;
        IlpConstraint c;
        c.kind = IlpConstraint::Kind::Prefix;
        c.name = "pre_w" + std::to_string(i + 1) + "_v" + std::to_string(p + 1) + "_" + std::to_string(t + 1);
        c.terms = {{pv, 1}, {qvars[p], -1}};
        c.rhs = 0;
        model.constraints.push_back(std::move(c));
      }
    }
  }
  for (std::size_t inst = 0; inst < ix.instances.size(); ++inst)
    if (prefix_var[inst] >= 0 && ix.instance_weight[inst] > 0)
      model.objective.push_back({prefix_var[inst], ix.instance_weight[inst]});
  std::sort(model.objective.begin(), model.objective.end(),
            [](const IlpTerm& a, const IlpTerm& b) { return a.var < b.var; });
  return model;
}

namespace {

// Accumulates one expression, wrapping long lines with an indent.
class LineWriter {
 public:
  explicit LineWriter(std::ostream& out) : out_(out) {}

  void start(const std::string& head) {
    line_ = " " + head;
    first_ = true;
  }
  void term(long long coef, const std::string& name) {
    long long mag = coef < 0 ? -coef : coef;
    std::string piece = first_ ? (coef < 0 ? " - " : " ") : (coef < 0 ? " - " : " + ");
    if (mag != 1) piece += std::to_string(mag) + " ";
    append(piece + name);
    first_ = false;
  }
  void constant(long long c) {
    if (c == 0) return;
    long long mag = c < 0 ? -c : c;
    append((first_ ? (c < 0 ? " - " : " ") : (c < 0 ? " - " : " + ")) + std::to_string(mag));
    first_ = false;
  }
  void finish(const std::string& tail) {
    append(tail);
    out_ << line_ << '\n';
    line_.clear();
  }

 private:
  void append(const std::string& piece) {
    if (line_.size() + piece.size() > 78 && line_.size() > 4) {
      out_ << line_ << '\n';
      line_ = "  " + piece.substr(piece.find_first_not_of(' '));
      return;
    }
    line_ += piece;
  }

  std::ostream& out_;
  std::string line_;
  bool first_ = true;
};

}  // namespace

void export_lp(const IlpModel& m, std::ostream& out) {
  out << "\\ Query: " << m.query << '\n';
  out << "\\ Witnesses: " << m.n << ", plans: " << m.k << ", atoms: " << m.m << '\n';
  out << "Minimize\n";
  LineWriter lw(out);
  lw.start("obj:");
  for (const auto& t : m.objective) lw.term(t.coef, m.vars[t.var].name);
  lw.constant(m.constant);
  lw.finish("");
  out << "Subject To\n";
  for (const auto& c : m.constraints) {
    lw.start(c.name + ":");
    for (const auto& t : c.terms) lw.term(t.coef, m.vars[t.var].name);
    lw.finish(" >= " + std::to_string(c.rhs));
  }
  out << "Binaries\n";
  for (const auto& v : m.vars) out << ' ' << v.name << '\n';
  out << "End\n";
  if (!out) throw IoError("failed to write LP model");
}

std::string export_lp(const IlpModel& m) {
  std::ostringstream out;
  export_lp(m, out);
  return out.str();
}

IlpStats model_stats(const IlpModel& m) {
  IlpStats s;
  s.vars = m.vars.size();
  for (const auto& v : m.vars) (v.kind == IlpVar::Kind::Plan ? s.plan_vars : s.prefix_vars) += 1;
  s.objective_vars = m.objective.size();
  s.constraints = m.constraints.size();
  for (const auto& c : m.constraints)
    (c.kind == IlpConstraint::Kind::Plan ? s.plan_constraints : s.prefix_constraints) += 1;
  s.n = m.n;
  s.k = m.k;
  s.m = m.m;
  s.constant = m.constant;
  s.constraint_bound = m.n * (1 + m.k * m.m);
  s.within_bound = s.constraints <= s.constraint_bound;
  return s;
}

long long solve_ilp_model(const IlpModel& m, std::size_t max_combinations) {
  std::vector<const IlpConstraint*> plans;
  std::vector<std::vector<int>> implied(m.vars.size());
  for (const auto& c : m.constraints) {
    if (c.kind == IlpConstraint::Kind::Plan) {
      plans.push_back(&c);
    } else {
      int p = -1, qv = -1;
      for (const auto& t : c.terms) (t.coef > 0 ? p : qv) = t.var;
      implied[qv].push_back(p);
    }
  }
  double combos = 1;
  for (const auto* c : plans) combos *= static_cast<double>(c->terms.size());
  if (combos > static_cast<double>(max_combinations))
    throw ExpansionTooLarge("model has too many plan combinations to enumerate");
  std::vector<long long> weight(m.vars.size(), 0);
  for (const auto& t : m.objective) weight[t.var] += t.coef;
  std::vector<int> on(m.vars.size(), 0);
  long long cost = 0;
  long long best = -1;
  auto set = [&](int v, int delta) {
    if (delta > 0 && on[v]++ == 0) cost += weight[v];
    if (delta < 0 && --on[v] == 0) cost -= weight[v];
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (best >= 0 && cost >= best) return;
    if (i == plans.size()) {
      best = cost;
      return;
    }
    for (const auto& t : plans[i]->terms) {
      set(t.var, 1);
      for (int p : implied[t.var]) set(p, 1);
      self(self, i + 1);
      for (int p : implied[t.var]) set(p, -1);
      set(t.var, -1);
    }
  };
  rec(rec, 0);
  return best + m.constant;
}

}  // namespace provfact
