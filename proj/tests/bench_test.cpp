#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "provfact/bench.hpp"
#include "provfact/error.hpp"

using namespace provfact;

namespace {

BenchConfig small_config() {
  BenchConfig c;
  c.queries = {"2chain-we", "triangle"};
  c.domains = {4};
  c.tuples = {3, 6};
  c.repetitions = 3;
  c.seed = 9;
  return c;
}

}  // namespace

TEST(BenchConfig, Parse) {
  auto c = parse_bench_config(
      "# sweep\nqueries = triangle, Q :- R(x,y), S(y,z)\ndomains = 10, 50\ntuples = 5\n"
      "repetitions = 2\nmethods = flow, exact\ntime_cap_s = 1.5\nnode_budget = 1000\nseed = 4\nmedian = true\n");
  EXPECT_EQ(c.queries, (std::vector<std::string>{"triangle", "Q :- R(x,y), S(y,z)"}));
  EXPECT_EQ(c.domains, (std::vector<int>{10, 50}));
  EXPECT_EQ(c.tuples, (std::vector<std::size_t>{5}));
  EXPECT_EQ(c.repetitions, 2u);
  EXPECT_EQ(c.methods, (std::vector<std::string>{"flow", "exact"}));
  EXPECT_DOUBLE_EQ(c.time_cap_s, 1.5);
  EXPECT_EQ(c.node_budget, 1000u);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_TRUE(c.median);
}

TEST(BenchConfig, Errors) {
  EXPECT_THROW(parse_bench_config("queries\n"), FormatError);
  EXPECT_THROW(parse_bench_config("colour = red\n"), FormatError);
  EXPECT_THROW(parse_bench_config("domains = ten\n"), FormatError);
  EXPECT_THROW(parse_bench_config("median = maybe\n"), FormatError);
  EXPECT_THROW(load_bench_config(std::string(PROVFACT_TEST_DATA) + "/none.cfg"), IoError);
  EXPECT_NO_THROW(load_bench_config(std::string(PROVFACT_TEST_DATA) + "/bench.cfg"));
}

TEST(RunSweep, ZeroRepetitionsGivesHeaderOnly) {
  auto c = small_config();
  c.repetitions = 0;
  auto rows = run_sweep(c);
  EXPECT_TRUE(rows.empty());
  std::ostringstream out;
  write_csv(rows, out);
  EXPECT_EQ(out.str(), std::string(kBenchHeader) + "\n");
}

TEST(RunSweep, RowsAndOrdering) {
  auto rows = run_sweep(small_config());
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.size() % 3, 0u);
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    const auto& ex = rows[i];
    const auto& fl = rows[i + 1];
    const auto& si = rows[i + 2];
    ASSERT_EQ(ex.method, "exact");
    ASSERT_EQ(fl.method, "flow");
    ASSERT_EQ(si.method, "single");
    EXPECT_EQ(ex.seed, fl.seed);
    EXPECT_EQ(ex.witnesses, si.witnesses);
    EXPECT_GT(ex.witnesses, 0u);
    ASSERT_EQ(ex.optimal, "yes");
    EXPECT_LE(ex.length, fl.length);
    EXPECT_LE(fl.length, si.length);
    ASSERT_TRUE(ex.penalty_pct && fl.penalty_pct && si.penalty_pct);
    EXPECT_DOUBLE_EQ(*ex.penalty_pct, 0.0);
    EXPECT_GE(*fl.penalty_pct, 0.0);
    EXPECT_LE(*fl.penalty_pct, *si.penalty_pct);
    EXPECT_NEAR(*si.penalty_pct, 100.0 * static_cast<double>(si.length - ex.length) / ex.length, 1e-9);
  }
}

TEST(RunSweep, LengthsAreDeterministic) {
  auto a = run_sweep(small_config());
  auto b = run_sweep(small_config());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].length, b[i].length);
    EXPECT_EQ(a[i].witnesses, b[i].witnesses);
    EXPECT_EQ(a[i].seed, b[i].seed);
  }
}

TEST(RunSweep, WitnessCountsGrowWithTuples) {
  BenchConfig c;
  c.queries = {"triangle-unary"};
  c.domains = {10};
  c.tuples = {20, 60, 150};
  c.repetitions = 5;
  c.methods = {"flow"};
  c.median = true;
  auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LE(rows[0].witnesses, rows[1].witnesses);
  EXPECT_LE(rows[1].witnesses, rows[2].witnesses);
}

TEST(WriteCsv, Format) {
  BenchRow r;
  r.query = "Q";
  r.d = 4;
  r.tuples = 12;
  r.witnesses = 5;
  r.method = "flow";
  r.length = 11;
  r.optimal = "no";
  r.penalty_pct = 10.0;
  r.solve_ms = 0.25;
  r.build_ms = 1;
  r.nodes = 0;
  r.seed = 3;
  BenchRow unknown = r;
  unknown.penalty_pct.reset();
  unknown.optimal = "unknown";
  std::ostringstream out;
  write_csv({r, unknown}, out);
  EXPECT_EQ(out.str(), std::string(kBenchHeader) +
                           "\nQ,4,12,5,flow,11,no,10.000,0.250,1.000,0,3\n"
                           "Q,4,12,5,flow,11,unknown,,0.250,1.000,0,3\n");
}
