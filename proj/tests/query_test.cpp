#include <gtest/gtest.h>

#include <algorithm>

#include "provfact/error.hpp"
#include "provfact/fixtures.hpp"
#include "provfact/query.hpp"
#include "provfact/veo.hpp"

using namespace provfact;

namespace {

std::vector<std::string> relations(const Query& q, const std::vector<std::size_t>& atoms) {
  std::vector<std::string> out;
  for (auto a : atoms) out.push_back(q.atom(a).relation);
  return out;
}

}  // namespace

TEST(ParseQuery, TwoChain) {
  auto q = parse_query("Q :- R(x,y), S(y,z)");
  EXPECT_EQ(q.name(), "Q");
  ASSERT_EQ(q.atom_count(), 2u);
  EXPECT_EQ(q.variables(), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(q.atom(1).relation, "S");
}

TEST(ParseQuery, TwoStar) {
  auto q = parse_query("Q :- R(x), S(x,y), T(y)");
  EXPECT_EQ(q.atom_count(), 3u);
  EXPECT_EQ(q.var_count(), 2u);
}

TEST(ParseQuery, WhitespaceIsInsignificant) {
  auto a = parse_query("Q:-R(x,y),S(y,z)");
  auto b = parse_query("  Q  :-  R( x , y ) ,\n S(y, z)  ");
  EXPECT_EQ(a.to_string(), b.to_string());
}

TEST(ParseQuery, Errors) {
  EXPECT_THROW(parse_query("Q :- R(x,y), R(y,z)"), SelfJoinError);
  EXPECT_THROW(parse_query("Q(x) :- R(x,y)"), HeadVarError);
  EXPECT_THROW(parse_query("Q :- R(x,y"), SyntaxError);
  EXPECT_THROW(parse_query(""), SyntaxError);
  EXPECT_THROW(parse_query("Q :- R()"), SyntaxError);
  EXPECT_THROW(parse_query("Q :- R(x,x)"), SyntaxError);
  EXPECT_THROW(parse_query("Q :- R(x), S(y)"), DisconnectedQuery);
}

TEST(ParseQuery, OptionalRelaxations) {
  ParseOptions opts;
  opts.allow_duplicate_vars = true;
  opts.allow_disconnected = true;
  EXPECT_NO_THROW(parse_query("Q :- R(x,x), S(y)", opts));
}

TEST(ParseQuery, ComponentsOfDisconnectedQuery) {
  ParseOptions opts;
  opts.allow_disconnected = true;
  auto q = parse_query("Q :- R(x,y), S(y), T(u), U(u,v)", opts);
  EXPECT_FALSE(q.connected());
  auto parts = connected_components(q);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].atom_count(), 2u);
  EXPECT_EQ(parts[1].atom(0).relation, "T");
}

TEST(ParseQuery, FileWithComments) {
  auto q = load_query(std::string(PROVFACT_TEST_DATA) + "/q2star.q");
  EXPECT_EQ(q.name(), "Q2star");
  EXPECT_THROW(load_query(std::string(PROVFACT_TEST_DATA) + "/missing.q"), IoError);
}

TEST(AtomsOf, Examples) {
  auto chain = named_query("2chain");
  EXPECT_EQ(relations(chain, atoms_of(chain, "y")), (std::vector<std::string>{"R", "S"}));
  auto star = named_query("q2star");
  EXPECT_EQ(relations(star, atoms_of(star, "x")), (std::vector<std::string>{"R", "S"}));
  auto star3 = named_query("q3star");
  EXPECT_EQ(relations(star3, atoms_of(star3, "z")), (std::vector<std::string>{"T", "W"}));
  EXPECT_THROW(atoms_of(chain, "w"), UnknownVariable);
}

TEST(Hierarchical, Examples) {
  EXPECT_TRUE(is_hierarchical(named_query("2chain")));
  EXPECT_FALSE(is_hierarchical(named_query("q2star")));
  EXPECT_FALSE(is_hierarchical(named_query("3chain")));
  EXPECT_TRUE(is_hierarchical(parse_query("Q :- R(x), S(x,y), T(x,y,z)")));
}

TEST(IndependentAtoms, Examples) {
  auto tu = named_query("triangle-unary");
  auto ind = relations(tu, independent_atoms(tu));
  EXPECT_EQ(std::count(ind.begin(), ind.end(), "R"), 0);
  EXPECT_EQ(std::count(ind.begin(), ind.end(), "T"), 0);
  auto star3 = named_query("q3star");
  EXPECT_EQ(relations(star3, independent_atoms(star3)), (std::vector<std::string>{"R", "S", "T"}));
  auto one = parse_query("Q :- R(x,y)");
  EXPECT_EQ(independent_atoms(one), (std::vector<std::size_t>{0}));
}

TEST(IndependentAtoms, EqualVariableSetsStayIndependent) {
  auto q = parse_query("Q :- R(x,y), S(x,y)");
  EXPECT_EQ(independent_atoms(q).size(), 2u);
  EXPECT_TRUE(has_equal_var_sets(q));
  EXPECT_FALSE(has_equal_var_sets(named_query("triangle")));
}

TEST(Triad, Examples) {
  auto star3 = named_query("q3star");
  auto t = has_triad(star3);
  ASSERT_TRUE(t);
  EXPECT_EQ(relations(star3, {(*t)[0], (*t)[1], (*t)[2]}), (std::vector<std::string>{"R", "S", "T"}));
  auto tri = named_query("triangle");
  ASSERT_TRUE(has_triad(tri));
  EXPECT_FALSE(has_triad(named_query("triangle-unary")));
}

TEST(Linear, Examples) {
  EXPECT_TRUE(is_linear(named_query("q2star")));
  EXPECT_FALSE(is_linear(named_query("triangle")));
  EXPECT_TRUE(is_linear(named_query("2chain-we")));
  EXPECT_TRUE(is_linear(named_query("3chain")));
}

// Properties over every built-in query and a few extra shapes.
TEST(QueryProperties, TriadImpliesNonHierarchical) {
  std::vector<Query> qs;
  for (const auto& nq : named_queries()) qs.push_back(parse_query(nq.text));
  qs.push_back(parse_query("Q :- R(x), S(x,y), T(x,y,z)"));
  qs.push_back(parse_query("Q :- R(x,y,z), S(x), T(y), U(z)"));
  qs.push_back(parse_query("Q :- R(x,y), S(y,z), T(z,u), U(u,x)"));
  for (const auto& q : qs) {
    SCOPED_TRACE(q.to_string());
    if (has_triad(q)) EXPECT_FALSE(is_hierarchical(q));
    EXPECT_EQ(is_linear(q), !has_triad(q).has_value());
    if (is_hierarchical(q)) EXPECT_EQ(enumerate_mveo(q).size(), 1u);
    for (std::size_t i = 0; i < q.atom_count(); ++i)
      for (std::size_t j = i + 1; j < q.atom_count(); ++j) EXPECT_NE(q.atom(i).relation, q.atom(j).relation);
  }
}

TEST(NamedQueries, UnknownNameThrows) { EXPECT_THROW(named_query("pentagon"), Error); }
