#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "provfact/error.hpp"
#include "provfact/fixtures.hpp"
#include "provfact/ilp.hpp"

using namespace provfact;

namespace {

const std::string kData = PROVFACT_TEST_DATA;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(BuildIlp, ThreeChainTwoWitnesses) {
  auto q = named_query("3chain");
  auto d = three_chain_database();
  auto w = compute_witnesses(q, d);
  auto m = build_ilp(q, d, w);
  auto s = model_stats(m);
  EXPECT_EQ(s.plan_constraints, 2u);
  EXPECT_EQ(s.prefix_constraints, 12u);
  EXPECT_EQ(s.prefix_vars, 8u);
  EXPECT_EQ(s.plan_vars, 4u);
  EXPECT_EQ(s.constraints, 14u);
  EXPECT_EQ(s.constraint_bound, 14u);
  EXPECT_TRUE(s.within_bound);
  EXPECT_EQ(solve_ilp_model(m), 4);
}

TEST(BuildIlp, ThreeStarReducedPerWitness) {
  auto q = named_query("q3star");
  auto d = parse_database("[R]\n1\n[S]\n1\n[T]\n1\n[W]\n1,1,1\n");
  auto w = compute_witnesses(q, d);
  IlpOptions opts;
  opts.reduce = true;
  auto m = build_ilp(q, d, w, opts);
  auto s = model_stats(m);
  EXPECT_EQ(s.objective_vars, 9u);
  EXPECT_EQ(s.plan_constraints, 1u);
  EXPECT_EQ(s.prefix_constraints, 6u);
  EXPECT_EQ(s.constant, 2);
}

TEST(BuildIlp, OnePlanForcesPrefixes) {
  auto q = named_query("2chain");
  auto d = parse_database("[R]\n1,2\n[S]\n2,3\n");
  auto w = compute_witnesses(q, d);
  auto m = build_ilp(q, d, w);
  auto s = model_stats(m);
  EXPECT_EQ(s.k, 1u);
  EXPECT_EQ(s.plan_constraints, 1u);
  EXPECT_EQ(s.prefix_constraints, 2u);
  EXPECT_EQ(solve_ilp_model(m), 2);
}

TEST(BuildIlp, EmptyWitnessSet) {
  auto q = named_query("q2star");
  EXPECT_THROW(build_ilp(q, Database{}, WitnessSet{}), EmptyWitnessSet);
}

TEST(ExportLp, GoldenTwoStarOneWitness) {
  auto q = load_query(kData + "/q2star.q");
  auto d = load_database(kData + "/q2star_one.db");
  auto m = build_ilp(q, d, compute_witnesses(q, d));
  EXPECT_EQ(export_lp(m), read_file(kData + "/q2star_one.lp"));
}

TEST(ExportLp, SharedPrefixIsOneVariable) {
  auto q = named_query("3chain");
  auto d = three_chain_database();
  auto m = build_ilp(q, d, compute_witnesses(q, d));
  std::map<int, int> uses;
  for (const auto& c : m.constraints)
    if (c.kind == IlpConstraint::Kind::Prefix)
      for (const auto& t : c.terms)
        if (t.coef > 0) uses[t.var]++;
  int shared = 0;
  for (auto [v, n] : uses) shared += n >= 2;
  EXPECT_GT(shared, 0);
  // Shared variables appear once in the objective.
  std::set<int> objective;
  for (const auto& t : m.objective) EXPECT_TRUE(objective.insert(t.var).second);
}

TEST(ExportLp, ZeroWeightPrefixesOmitted) {
  auto q = named_query("3chain");
  auto d = three_chain_database();
  auto m = build_ilp(q, d, compute_witnesses(q, d));
  for (const auto& t : m.objective) EXPECT_GT(t.coef, 0);
  auto text = export_lp(m);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("Binaries"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 4), "End\n");
}

// The model optimum is the brute-force minimum, with and without reduction,
// and the constraint count respects n(1 + km).
TEST(IlpProperties, OptimumMatchesOracle) {
  std::mt19937_64 rng(23);
  for (const char* name : {"q2star", "3chain", "q3star", "triangle", "triangle-unary", "2chain-we"}) {
    auto q = named_query(name);
    int checked = 0;
    for (int rep = 0; rep < 40 && checked < 12; ++rep) {
      auto d = oracle::random_database(q, 3, 4, rng);
      auto w = compute_witnesses(q, d);
      if (w.empty()) continue;
      auto best = oracle::brute_force(q, d, w, 100'000);
      if (!best) continue;
      ++checked;
      auto m = build_ilp(q, d, w);
      EXPECT_TRUE(model_stats(m).within_bound) << name;
      EXPECT_EQ(solve_ilp_model(m), best->length) << name;
      IlpOptions opts;
      opts.reduce = true;
      auto r = build_ilp(q, d, w, opts);
      EXPECT_TRUE(model_stats(r).within_bound) << name;
      EXPECT_EQ(solve_ilp_model(r), best->length) << name;
    }
    EXPECT_GT(checked, 5) << name;
  }
}
