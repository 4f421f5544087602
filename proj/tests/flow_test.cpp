#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "provfact/error.hpp"
#include "provfact/exact.hpp"
#include "provfact/fixtures.hpp"
#include "provfact/flow.hpp"
#include "provfact/maxflow.hpp"
#include "provfact/ordering.hpp"

using namespace provfact;

namespace {

FlowFactorization nested_flow(const Query& q, const Database& d, const WitnessSet& w) {
  return solve_flow(q, d, w, build_ordering(q, enumerate_mveo(q)));
}

std::size_t count_kind(const FlowGraph& g, FlowNode::Kind k) {
  std::size_t n = 0;
  for (const auto& node : g.nodes) n += node.kind == k;
  return n;
}

}  // namespace

TEST(MaxFlow, SmallNetwork) {
  MaxFlow f;
  for (int i = 0; i < 4; ++i) f.add_node();
  f.add_edge(0, 1, 3);
  f.add_edge(0, 2, 2);
  f.add_edge(1, 2, 5);
  f.add_edge(1, 3, 2);
  f.add_edge(2, 3, 3);
  EXPECT_EQ(f.solve(0, 3), 5);
  auto reach = f.residual_reachable(0);
  EXPECT_TRUE(reach[0]);
  EXPECT_FALSE(reach[3]);
}

TEST(FlowGraph, TriangleTwoWitnesses) {
  auto q = named_query("triangle");
  auto d = triangle_database();
  auto w = compute_witnesses(q, d);
  ASSERT_EQ(w.size(), 2u);
  auto g = build_flow_graph(q, d, w, build_ordering(q, enumerate_mveo(q)));
  EXPECT_EQ(count_kind(g, FlowNode::Kind::Plan), 6u);
  // The (zx) instance of both witnesses is a single node.
  int shared = -1;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (g.nodes[i].kind == FlowNode::Kind::Prefix && g.nodes[i].label.find("z0x0") != std::string::npos)
      shared = static_cast<int>(i);
  ASSERT_GE(shared, 0);
  std::set<int> witnesses_touching;
  for (auto [a, b] : g.edges)
    for (int end : {a, b})
      if ((a == shared || b == shared) && end != shared && g.nodes[end].witness >= 0)
        witnesses_touching.insert(g.nodes[end].witness);
  EXPECT_EQ(witnesses_touching, (std::set<int>{0, 1}));

  auto cut = min_cut(g);
  EXPECT_EQ(cut.value, 5);
  EXPECT_EQ(cut.nodes.size(), 3u);
  auto f = extract_factorization(q, d, w, g, cut);
  EXPECT_EQ(f.fact.length, 5);
  EXPECT_EQ(render_expression(d, f.fact.expression), "t_00 (r_00 s_00 ∨ r_01 s_10)");
}

TEST(FlowGraph, TriangleUnarySingleWitness) {
  auto q = named_query("triangle-unary");
  auto d = parse_database("[U]\n1\n[R]\n1,2\n[S]\n2,3\n[T]\n3,1\n");
  auto w = compute_witnesses(q, d);
  auto g = build_flow_graph(q, d, w, build_ordering(q, enumerate_mveo(q)));
  // Only the `x` instance of U is shared by two plans.
  ASSERT_EQ(count_kind(g, FlowNode::Kind::Prefix), 1u);
  for (const auto& node : g.nodes)
    if (node.kind == FlowNode::Kind::Plan) EXPECT_GE(node.capacity, 2);
  EXPECT_EQ(min_cut(g).value, 4);
}

TEST(FlowGraph, SinglePlanChain) {
  auto q = named_query("2chain");
  auto d = parse_database("[R]\n1,2\n[S]\n2,3\n");
  auto w = compute_witnesses(q, d);
  auto g = build_flow_graph(q, d, w, build_ordering(q, enumerate_mveo(q)));
  EXPECT_EQ(count_kind(g, FlowNode::Kind::Plan), 1u);
  auto f = solve_flow(q, d, w, g.ordering);
  EXPECT_EQ(f.cut_value, 2);
  EXPECT_EQ(f.fact.length, 2);
}

TEST(FlowGraph, EmptyWitnessSet) {
  auto q = named_query("triangle");
  Database d;
  auto f = solve_flow(q, d, WitnessSet{}, build_ordering(q, enumerate_mveo(q)));
  EXPECT_EQ(f.cut_value, 0);
  EXPECT_EQ(f.fact.length, 0);
}

TEST(FlowGraph, StrictModeRejectsNonRp) {
  auto q = named_query("triangle-unary");
  auto d = parse_database("[U]\n1\n[R]\n1,2\n[S]\n2,3\n[T]\n3,1\n");
  auto w = compute_witnesses(q, d);
  auto plans = enumerate_mveo(q);  // (yz) <- x, x <- y <- z, x <- z <- y
  auto o = build_flat_ordering(q, plans, {1, 0, 2});
  ASSERT_FALSE(o.rp);
  EXPECT_THROW(build_flow_graph(q, d, w, o, true), NonRpOrdering);
  auto f = solve_flow(q, d, w, o);
  EXPECT_FALSE(f.rp);
  EXPECT_TRUE(verify_equivalence(f.fact, w));
}

TEST(Leakage, FlatPermutations) {
  auto q = named_query("triangle");
  auto d = leakage_database();
  auto w = compute_witnesses(q, d);
  auto plans = enumerate_mveo(q);  // (xy) <- z, (yz) <- x, (zx) <- y
  std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  // Leakage occurs exactly when (yz) <- x sits between the other two plans.
  std::vector<long long> expected = {11, 10, 10, 10, 10, 11};
  for (std::size_t i = 0; i < perms.size(); ++i) {
    auto f = solve_flow(q, d, w, build_flat_ordering(q, plans, perms[i]));
    EXPECT_EQ(f.cut_value, expected[i]) << i;
    EXPECT_EQ(f.fact.length, f.cut_value);
    EXPECT_TRUE(verify_equivalence(f.fact, w));
  }
  EXPECT_EQ(solve_exact(q, d, w).fact.length, 10);
}

TEST(Extraction, ReadOnceTwoStar) {
  auto q = named_query("q2star");
  auto d = two_star_database(false);
  auto w = compute_witnesses(q, d);
  auto f = nested_flow(q, d, w);
  EXPECT_EQ(f.fact.length, 10);
  EXPECT_EQ(f.fact.repeats, 0);
}

TEST(Extraction, SingleWitness) {
  auto q = named_query("q3star");
  auto d = parse_database("[R]\n1\n[S]\n2\n[T]\n3\n[W]\n1,2,3\n");
  auto w = compute_witnesses(q, d);
  auto f = nested_flow(q, d, w);
  EXPECT_EQ(f.fact.length, 4);
  EXPECT_EQ(f.fact.expression.kind, Expr::Kind::And);
}

TEST(WriteDot, MarksCutNodes) {
  auto q = named_query("triangle");
  auto d = triangle_database();
  auto w = compute_witnesses(q, d);
  auto g = build_flow_graph(q, d, w, build_ordering(q, enumerate_mveo(q)));
  auto cut = min_cut(g);
  std::ostringstream plain, marked;
  write_dot(g, plain);
  write_dot(g, marked, &cut);
  EXPECT_EQ(plain.str().rfind("digraph", 0), 0u);
  EXPECT_EQ(plain.str().find("lightcoral"), std::string::npos);
  EXPECT_NE(marked.str().find("lightcoral"), std::string::npos);
}

// Every cut yields a sound factorization no shorter than the optimum, equal
// to the cut value, and optimal in the proven classes.
TEST(FlowProperties, RandomSuites) {
  std::mt19937_64 rng(37);
  for (const char* name : {"q2star", "2chain", "3chain", "q3star", "triangle", "triangle-unary", "2chain-we"}) {
    auto q = named_query(name);
    auto plans = enumerate_mveo(q);
    bool two_plans = plans.size() <= 2;
    bool nested_optimal = two_plans || std::string(name) == "triangle-unary";
    for (int rep = 0; rep < 30; ++rep) {
      auto d = oracle::random_database(q, 3, 3 + rep % 5, rng);
      auto w = compute_witnesses(q, d);
      auto f = nested_flow(q, d, w);
      EXPECT_TRUE(verify_equivalence(f.fact, w)) << name;
      EXPECT_EQ(f.fact.length, f.cut_value) << name;
      EXPECT_EQ(f.repaired, 0u);
      if (w.empty()) continue;
      auto ex = solve_exact(q, d, w);
      ASSERT_TRUE(ex.search.optimal);
      EXPECT_GE(f.fact.length, ex.fact.length) << name;
      if (nested_optimal || !detect_p4(w)) EXPECT_EQ(f.fact.length, ex.fact.length) << name << " rep " << rep;
    }
  }
}
