#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "provfact/database.hpp"
#include "provfact/error.hpp"
#include "provfact/factorization.hpp"
#include "provfact/fixtures.hpp"
#include "provfact/veo.hpp"

using namespace provfact;

namespace {

std::vector<std::string> serialize(const std::vector<Veo>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.str());
  return out;
}

bool contains(const std::vector<Veo>& vs, const std::string& s) {
  return std::any_of(vs.begin(), vs.end(), [&](const Veo& v) { return v.str() == s; });
}

// Prefix paths of a VEO rendered with their weights.
std::vector<std::pair<std::string, int>> prefixes(const Query& q, const std::string& veo) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& p : table_prefixes(parse_veo(q, veo), q)) out.emplace_back(render_path(q, p.path), p.weight);
  return out;
}

VarSet vars(const Query& q, const std::string& names) {
  VarSet s = 0;
  for (char c : names) s |= VarSet{1} << q.var_index(std::string(1, c));
  return s;
}

}  // namespace

TEST(EnumerateVeos, ThreeChainContainsWorkedPlans) {
  auto q = named_query("3chain");
  auto all = enumerate_veos(q);
  EXPECT_TRUE(contains(all, "z <- (u, y <- x)"));
  EXPECT_TRUE(contains(all, "(xyzu)"));
  for (const auto& v : all) EXPECT_TRUE(is_legal(v, q)) << v.str();
}

TEST(EnumerateVeos, SingleVariable) {
  auto q = parse_query("Q :- R(x)");
  EXPECT_EQ(serialize(enumerate_veos(q)), (std::vector<std::string>{"x"}));
}

TEST(EnumerateVeos, VariableLimit) {
  auto q = named_query("6cycle-we");
  VeoOptions opts;
  opts.max_vars = 5;
  EXPECT_THROW(enumerate_veos(q, opts), TooManyVariables);
  EXPECT_THROW(enumerate_mveo(q, opts), TooManyVariables);
}

TEST(EnumerateVeos, SerializationsAreUniqueAndRoundTrip) {
  for (const char* name : {"q2star", "3chain", "triangle", "triangle-unary"}) {
    auto q = named_query(name);
    auto all = serialize(enumerate_veos(q));
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end()) << name;
    for (const auto& s : all) EXPECT_EQ(parse_veo(q, s).str(), s);
  }
}

TEST(ParseVeo, CanonicalizesChildrenAndNodes) {
  auto q = named_query("3chain");
  EXPECT_EQ(parse_veo(q, "z <- (y <- x, u)").str(), "z <- (u, y <- x)");
  auto tri = named_query("triangle");
  EXPECT_EQ(parse_veo(tri, "(zy) <- x").str(), "(yz) <- x");
  EXPECT_THROW(parse_veo(q, "z <- (u, y"), SyntaxError);
  EXPECT_THROW(parse_veo(q, "z <- y <- x"), IllegalAssignment);
}

TEST(Dissociation, TwoStar) {
  auto q = named_query("q2star");
  EXPECT_EQ(dissociation_of(parse_veo(q, "x <- y"), q), (std::vector<VarSet>{0, 0, vars(q, "x")}));
  EXPECT_EQ(dissociation_of(parse_veo(q, "(xy)"), q), (std::vector<VarSet>{vars(q, "y"), 0, vars(q, "x")}));
}

TEST(Dissociation, PrefixCoversAtom) {
  for (const auto& nq : named_queries()) {
    if (nq.name == "6cycle-we") continue;
    auto q = parse_query(nq.text);
    for (const auto& v : enumerate_veos(q)) {
      auto delta = dissociation_of(v, q);
      auto nodes = table_prefix_nodes(v, q);
      for (std::size_t a = 0; a < q.atom_count(); ++a) {
        VarSet path = 0;
        for (auto s : v.path_to(nodes[a])) path |= s;
        EXPECT_EQ(path & q.atom_vars(a), q.atom_vars(a));
        EXPECT_EQ(delta[a], path & ~q.atom_vars(a));
      }
    }
  }
}

TEST(Mveo, FixtureSets) {
  EXPECT_EQ(serialize(enumerate_mveo(named_query("q2star"))), (std::vector<std::string>{"x <- y", "y <- x"}));
  EXPECT_EQ(enumerate_mveo(named_query("3chain")).size(), 2u);
  auto star3 = enumerate_mveo(named_query("q3star"));
  EXPECT_EQ(star3.size(), 6u);
  for (const auto& v : star3) EXPECT_TRUE(v.is_chain()) << v.str();
  EXPECT_EQ(serialize(enumerate_mveo(named_query("triangle"))),
            (std::vector<std::string>{"(xy) <- z", "(yz) <- x", "(zx) <- y"}));
  EXPECT_EQ(serialize(enumerate_mveo(named_query("triangle-unary"))),
            (std::vector<std::string>{"(yz) <- x", "x <- y <- z", "x <- z <- y"}));
  EXPECT_EQ(enumerate_mveo(named_query("2chain-we")).size(), 5u);
}

TEST(Mveo, HierarchicalHasOnePlan) {
  EXPECT_EQ(enumerate_mveo(named_query("2chain")).size(), 1u);
  EXPECT_EQ(enumerate_mveo(parse_query("Q :- R(x), S(x,y), T(x,y,z)")).size(), 1u);
}

// Every minimal plan is Pareto-minimal among all legal plans, and every legal
// plan is dominated by some minimal one.
TEST(Mveo, ParetoAgainstAllVeos) {
  std::vector<Query> qs;
  for (const char* n : {"q2star", "3chain", "q3star", "triangle", "triangle-unary", "2chain-we"})
    qs.push_back(named_query(n));
  qs.push_back(parse_query("Q :- R(x,y), S(y,z), T(z,u), U(u,x)"));
  for (const auto& q : qs) {
    SCOPED_TRACE(q.to_string());
    auto all = enumerate_veos(q);
    auto min = enumerate_mveo(q);
    for (const auto& m : min) {
      auto dm = dissociation_of(m, q);
      for (const auto& v : all) {
        auto dv = dissociation_of(v, q);
        EXPECT_FALSE(dissociation_leq(dv, dm) && dv != dm) << v.str() << " beats " << m.str();
      }
    }
    for (const auto& v : all) {
      auto dv = dissociation_of(v, q);
      EXPECT_TRUE(std::any_of(min.begin(), min.end(),
                              [&](const Veo& m) { return dissociation_leq(dissociation_of(m, q), dv); }))
          << v.str();
    }
    auto names = serialize(min);
    EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  }
}

TEST(TablePrefixes, Examples) {
  auto star = named_query("q2star");
  EXPECT_EQ(prefixes(star, "x <- y"), (std::vector<std::pair<std::string, int>>{{"x", 1}, {"x <- y", 2}}));
  auto chain = named_query("3chain");
  EXPECT_EQ(prefixes(chain, "y <- (x, z <- u)"),
            (std::vector<std::pair<std::string, int>>{{"y <- x", 1}, {"y <- z", 1}, {"y <- z <- u", 1}}));
  auto tri = named_query("triangle");
  EXPECT_EQ(prefixes(tri, "(yz) <- x"), (std::vector<std::pair<std::string, int>>{{"(yz)", 1}, {"(yz) <- x", 2}}));
}

TEST(TablePrefixes, WeightsSumToAtomCount) {
  for (const auto& nq : named_queries()) {
    if (nq.name == "6cycle-we") continue;
    auto q = parse_query(nq.text);
    for (const auto& v : enumerate_veos(q)) {
      int total = 0;
      for (const auto& p : table_prefixes(v, q)) {
        total += p.weight;
        EXPECT_EQ(static_cast<std::size_t>(p.weight), p.atoms.size());
      }
      EXPECT_EQ(total, static_cast<int>(q.atom_count())) << v.str();
    }
  }
}

// A plan whose dissociation is componentwise smaller never yields a longer
// factorization.
TEST(DissociationOrder, MonotoneOnRandomDatabases) {
  std::mt19937_64 rng(17);
  for (const char* name : {"q2star", "3chain", "triangle", "triangle-unary"}) {
    auto q = named_query(name);
    auto all = enumerate_veos(q);
    std::vector<std::vector<VarSet>> delta;
    for (const auto& v : all) delta.push_back(dissociation_of(v, q));
    for (int rep = 0; rep < 8; ++rep) {
      auto d = oracle::random_database(q, 3, 5, rng);
      auto w = compute_witnesses(q, d);
      if (w.empty()) continue;
      std::vector<long long> len;
      for (std::size_t i = 0; i < all.size(); ++i) len.push_back(assemble_uniform(q, d, w, all, i).length);
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j)
          if (dissociation_leq(delta[i], delta[j]))
            EXPECT_LE(len[i], len[j]) << name << ": " << all[i].str() << " vs " << all[j].str();
    }
  }
}
