#include "oracle.hpp"

#include <unordered_set>

namespace oracle {

std::optional<BruteForce> brute_force(const provfact::Query& q, const provfact::Database& d,
                                      const provfact::WitnessSet& w, std::uint64_t limit) {
  auto plans = provfact::enumerate_mveo(q);
  const std::size_t k = plans.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total *= k;
    if (total > limit) return std::nullopt;
  }
  BruteForce best;
  best.length = -1;
  std::vector<int> a(w.size(), 0);
  for (std::uint64_t step = 0; step < total; ++step) {
    auto f = provfact::assemble(q, d, w, plans, a);
    long long len = static_cast<long long>(provfact::literal_count(f.expression));
    if (best.length < 0 || len < best.length) {
      best.length = len;
      best.assignment = a;
    }
    for (std::size_t i = w.size(); i-- > 0;) {
      if (++a[i] < static_cast<int>(k)) break;
      a[i] = 0;
    }
  }
  if (best.length < 0) best.length = 0;
  return best;
}

int independence_number(const provfact::Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool independent = true;
    for (auto [a, b] : g.edges)
      if ((mask >> a & 1u) && (mask >> b & 1u)) {
        independent = false;
        break;
      }
    if (independent) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

provfact::Database random_database(const provfact::Query& q, int domain, int tuples, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> value(0, domain - 1);
  provfact::Database d;
  for (const auto& atom : q.atoms()) {
    d.add_relation(atom.relation);
    for (int t = 0; t < tuples; ++t) {
      std::vector<std::string> row;
      for (std::size_t i = 0; i < atom.vars.size(); ++i) row.push_back(std::to_string(value(rng)));
      d.add_tuple(atom.relation, row);
    }
  }
  return d;
}

namespace {

void literals(const provfact::Expr& e, std::vector<int>& out) {
  if (e.kind == provfact::Expr::Kind::Literal) out.push_back(e.tuple);
  for (const auto& c : e.children) literals(c, out);
}

}  // namespace

bool read_once(const provfact::Expr& e) {
  std::vector<int> all;
  literals(e, all);
  std::unordered_set<int> seen(all.begin(), all.end());
  return seen.size() == all.size();
}

}  // namespace oracle
