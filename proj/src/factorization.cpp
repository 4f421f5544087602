#include "provfact/factorization.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "provfact/error.hpp"
#include "provfact/instances.hpp"

namespace provfact {

Expr Expr::literal(int tuple) {
  Expr e;
  e.kind = Kind::Literal;
  e.tuple = tuple;
  return e;
}

namespace {

Expr combine(Expr::Kind kind, std::vector<Expr> items) {
  std::vector<Expr> flat;
  for (auto& it : items) {
    if (it.kind == kind) {
      for (auto& c : it.children) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(it));
    }
  }
  if (flat.size() == 1) return std::move(flat[0]);
  Expr e;
  e.kind = flat.empty() ? Expr::Kind::False : kind;
  e.children = std::move(flat);
  return e;
}

}  // namespace

Expr Expr::conj(std::vector<Expr> items) { return combine(Kind::And, std::move(items)); }
Expr Expr::disj(std::vector<Expr> items) { return combine(Kind::Or, std::move(items)); }

std::size_t literal_count(const Expr& e) {
  if (e.kind == Expr::Kind::Literal) return 1;
  std::size_t n = 0;
  for (const auto& c : e.children) n += literal_count(c);
  return n;
}

namespace {

void collect_literals(const Expr& e, std::unordered_set<int>& out) {
  if (e.kind == Expr::Kind::Literal) out.insert(e.tuple);
  for (const auto& c : e.children) collect_literals(c, out);
}

void render(const Database& d, const Expr& e, bool ascii, bool nested, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::False:
      out += "false";
      return;
    case Expr::Kind::Literal:
      out += d.tuple_label(e.tuple);
      return;
    case Expr::Kind::And:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ' ';
        render(d, e.children[i], ascii, true, out);
      }
      return;
    case Expr::Kind::Or:
      if (nested) out += '(';
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ascii ? " v " : " ∨ ";
        render(d, e.children[i], ascii, false, out);
      }
      if (nested) out += ')';
      return;
  }
}

}  // namespace

std::size_t distinct_literal_count(const Expr& e) {
  std::unordered_set<int> seen;
  collect_literals(e, seen);
  return seen.size();
}

std::string render_expression(const Database& d, const Expr& e, bool ascii) {
  std::string out;
  render(d, e, ascii, false, out);
  return out;
}

namespace {

// A witness positioned at one node of its assigned plan.
struct Cursor {
  int witness;
  int plan;
  int node;
};

class Assembler {
 public:
  Assembler(const Query& q, const Database& d, const WitnessSet& w, const std::vector<Veo>& plans)
      : q_(q), d_(d), w_(w), plans_(plans) {
    for (const auto& p : plans) prefix_nodes_.push_back(table_prefix_nodes(p, q));
  }

  Expr root(const std::vector<int>& assignment) {
    std::vector<Cursor> all;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      all.push_back({static_cast<int>(i), assignment[i], 0});
    return branch(all);
  }

 private:
  // OR over the distinct node instances reached by `cursors`.
  Expr branch(const std::vector<Cursor>& cursors) {
    using Key = std::pair<std::vector<std::string>, std::vector<std::string>>;
    std::map<std::string, std::pair<Key, std::vector<Cursor>>> by_instance;
    for (const auto& c : cursors) {
      const Veo& v = plans_[c.plan];
      auto inst = instantiate(v, c.node, w_[c.witness].binding);
      auto& slot = by_instance[instance_key(inst)];
      if (slot.second.empty()) slot.first = sort_key(v.node(c.node).vars, w_[c.witness].binding);
      slot.second.push_back(c);
    }
    std::vector<std::pair<Key, std::vector<Cursor>>> ordered;
    for (auto& [k, entry] : by_instance) ordered.push_back(std::move(entry));
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      if (a.first.first != b.first.first) return a.first.first < b.first.first;
      const auto& x = a.first.second;
      const auto& y = b.first.second;
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                          [](const std::string& s, const std::string& t) {
                                            return constant_less(s, t);
                                          });
    });
    std::vector<Expr> items;
    for (auto& [key, group] : ordered) items.push_back(node(group));
    return Expr::disj(std::move(items));
  }

  // Cursors sharing one path instance.
  Expr node(const std::vector<Cursor>& cursors) {
    std::map<std::size_t, int> tuples;
    for (const auto& c : cursors) {
      const auto& nodes = prefix_nodes_[c.plan];
      for (std::size_t a = 0; a < nodes.size(); ++a)
        if (nodes[a] == c.node) tuples.emplace(a, w_[c.witness].tuples[a]);
    }
    // Group by the variable sets of the child subtrees.
    using Signature = std::vector<std::vector<std::string>>;
    std::map<Signature, std::vector<std::pair<std::vector<VarSet>, Cursor>>> groups;
    for (const auto& c : cursors) {
      const Veo& v = plans_[c.plan];
      std::vector<std::pair<std::vector<std::string>, VarSet>> kids;
      for (int k : v.node(c.node).children) {
        VarSet s = v.subtree_vars(k);
        auto names = var_names(q_, s);
        std::sort(names.begin(), names.end());
        kids.emplace_back(std::move(names), s);
      }
      std::sort(kids.begin(), kids.end());
      Signature sig;
      std::vector<VarSet> sets;
      for (auto& [names, s] : kids) {
        sig.push_back(names);
        sets.push_back(s);
      }
      groups[sig].emplace_back(std::move(sets), c);
    }
    std::vector<Expr> alternatives;
    bool ends_here = false;
    for (auto& [sig, members] : groups) {
      if (sig.empty()) {
        ends_here = true;
        continue;
      }
      std::vector<Expr> branches;
      for (std::size_t b = 0; b < sig.size(); ++b) {
        std::vector<Cursor> next;
        for (const auto& [sets, c] : members) {
          const Veo& v = plans_[c.plan];
          for (int k : v.node(c.node).children)
            if (v.subtree_vars(k) == sets[b]) next.push_back({c.witness, c.plan, k});
        }
        branches.push_back(branch(next));
      }
      alternatives.push_back(Expr::conj(std::move(branches)));
    }
    if (ends_here && !alternatives.empty())
      throw IllegalAssignment("plans disagree on the shape below a shared prefix");
    std::vector<Expr> items;
    for (auto& [a, t] : tuples) items.push_back(Expr::literal(t));
    if (!alternatives.empty()) items.push_back(Expr::disj(std::move(alternatives)));
    return Expr::conj(std::move(items));
  }

  std::pair<std::vector<std::string>, std::vector<std::string>> sort_key(VarSet s,
                                                                          const std::vector<int>& b) const {
    auto names = var_names(q_, s);
    std::sort(names.begin(), names.end());
    std::vector<std::string> values;
    for (int v : node_order(q_, s)) values.push_back(d_.constant(b[v]));
    return {std::move(names), std::move(values)};
  }

  const Query& q_;
  const Database& d_;
  const WitnessSet& w_;
  const std::vector<Veo>& plans_;
  std::vector<std::vector<int>> prefix_nodes_;
};

}  // namespace

Factorization assemble(const Query& q, const Database& d, const WitnessSet& w,
                       const std::vector<Veo>& plans, const std::vector<int>& assignment) {
  if (assignment.size() != w.size())
    throw IllegalAssignment("assignment has " + std::to_string(assignment.size()) + " entries for " +
                            std::to_string(w.size()) + " witnesses");
  for (int p : assignment)
    if (p < 0 || p >= static_cast<int>(plans.size()))
      throw IllegalAssignment("plan index " + std::to_string(p) + " out of range");
  for (const auto& p : plans)
    if (!is_legal(p, q)) throw IllegalAssignment("VEO " + p.str() + " is not legal for " + q.name());
  Factorization f;
  f.plans = plans;
  f.assignment = assignment;
  if (!w.empty()) f.expression = Assembler(q, d, w, plans).root(assignment);
  f.length = static_cast<long long>(literal_count(f.expression));
  f.repeats = f.length - static_cast<long long>(distinct_literal_count(f.expression));
  return f;
}

Factorization assemble_uniform(const Query& q, const Database& d, const WitnessSet& w,
                               const std::vector<Veo>& plans, int plan) {
  return assemble(q, d, w, plans, std::vector<int>(w.size(), plan));
}

std::set<Term> expand(const Expr& e, std::size_t max_terms) {
  auto too_large = [&] {
    throw ExpansionTooLarge("expression expands to more than " + std::to_string(max_terms) + " terms");
  };
  switch (e.kind) {
    case Expr::Kind::False:
      return {};
    case Expr::Kind::Literal:
      return {Term{e.tuple}};
    case Expr::Kind::Or: {
      std::set<Term> out;
      for (const auto& c : e.children) {
        auto sub = expand(c, max_terms);
        out.insert(sub.begin(), sub.end());
        if (out.size() > max_terms) too_large();
      }
      return out;
    }
    case Expr::Kind::And: {
      std::set<Term> acc{Term{}};
      for (const auto& c : e.children) {
        auto sub = expand(c, max_terms);
        if (acc.size() * sub.size() > max_terms) too_large();
        std::set<Term> next;
        for (const auto& a : acc)
          for (const auto& b : sub) {
            Term t;
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(t));
            next.insert(std::move(t));
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

bool verify_equivalence(const Expr& e, const WitnessSet& w, std::size_t max_terms) {
  std::set<Term> expected;
  for (const auto& x : w) {
    Term t = x.tuples;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    expected.insert(std::move(t));
  }
  return expand(e, max_terms) == expected;
}

bool verify_equivalence(const Factorization& f, const WitnessSet& w, std::size_t max_terms) {
  return verify_equivalence(f.expression, w, max_terms);
}

}  // namespace provfact
