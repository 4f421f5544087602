#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string kData = PROVFACT_TEST_DATA;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(PROVFACT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool has_line(const std::string& out, const std::string& line) {
  std::istringstream in(out);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

fs::path temp_path(const std::string& name) {
  auto dir = fs::temp_directory_path() / "provfact_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, Mveo) {
  auto r = run("mveo -q " + kData + "/triangle.q");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(xy) <- z\n(yz) <- x\n(zx) <- y\n");
  auto all = run("mveo -q q2star --all-veos");
  EXPECT_EQ(all.code, 0);
  EXPECT_TRUE(has_line(all.out, "(xy)"));
  auto verbose = run("--verbose mveo -q q2star");
  EXPECT_TRUE(has_line(verbose.out, "  x <- y  c=2  [S T]"));
}

TEST(Cli, Classify) {
  auto r = run("classify -q " + kData + "/triangle_unary.q");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("triangle-unary"), std::string::npos);
  EXPECT_TRUE(has_line(r.out, "route: triangle-unary"));
}

TEST(Cli, Witnesses) {
  auto r = run("witnesses -q q2star -d " + kData + "/two_star.db");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "witnesses: 4"));
  EXPECT_TRUE(has_line(r.out, "read-once: yes"));
}

TEST(Cli, FactorizeExact) {
  auto r = run("factorize -q " + kData + "/q2star.q -d " + kData + "/two_star_s13.db --method exact");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "length: 12"));
  EXPECT_TRUE(has_line(r.out, "repeats: 1"));
  EXPECT_TRUE(has_line(r.out, "optimal: yes"));
  EXPECT_TRUE(has_line(r.out, "verified: yes"));
}

TEST(Cli, FactorizeFlowWithLeakage) {
  auto dot = temp_path("leak.dot");
  auto r = run("--ascii factorize -q triangle -d " + kData + "/leakage.db --method flow --order flat:v1,v2,v3" +
               " --dump-graph " + dot.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "length: 11"));
  EXPECT_TRUE(has_line(r.out, "optimal: no"));
  EXPECT_TRUE(has_line(r.out, "exact: 10"));
  EXPECT_EQ(r.out.find("∨"), std::string::npos);
  EXPECT_EQ(read_file(dot).rfind("digraph", 0), 0u);
}

TEST(Cli, StrictRpRejectsOrdering) {
  auto r = run("--strict-rp factorize -q triangle-unary -d " + kData + "/triangle_unary.db --method flow --order flat:v2,v1,v3");
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, BudgetExhaustionExitsTwo) {
  auto db = temp_path("big.db");
  ASSERT_EQ(run("gen --random -q q3star -d 4 --tuples 40 --seed 3 -o " + db.string()).code, 0);
  auto r = run("factorize -q q3star -d " + db.string() + " --method exact --budget 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(has_line(r.out, "optimal: unknown"));
  EXPECT_NE(r.out.find("lower bound: "), std::string::npos);
}

TEST(Cli, Errors) {
  EXPECT_EQ(run("factorize -q " + kData + "/q2star.q -d " + kData + "/missing.db").code, 1);
  EXPECT_EQ(run("factorize -q nothing-here -d " + kData + "/two_star.db").code, 1);
  EXPECT_EQ(run("factorize -q q2star -d " + kData + "/two_star.db --method magic").code, 1);
  EXPECT_EQ(run("gen --random -q triangle").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, IlpGolden) {
  auto lp = temp_path("m.lp");
  auto r = run("ilp -q " + kData + "/q2star.q -d " + kData + "/q2star_one.db -o " + lp.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(read_file(lp), read_file(kData + "/q2star_one.lp"));
  EXPECT_TRUE(has_line(r.out, "constraints: 5 (1 plan, 4 prefix)"));
}

TEST(Cli, GadgetGeneration) {
  auto r = run("gen --gadget 3star --graph " + kData + "/gadget_example.edgelist");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[W]"), std::string::npos);
  EXPECT_EQ(run("gen --gadget pentagon --graph " + kData + "/gadget_example.edgelist").code, 1);
}

TEST(Cli, DeterministicOutput) {
  auto a = run("gen --random -q triangle -d 5 --tuples 12 --seed 21");
  auto b = run("gen --random -q triangle -d 5 --tuples 12 --seed 21");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto db = temp_path("det.db");
  std::ofstream(db) << a.out;
  auto f1 = run("factorize -q triangle -d " + db.string());
  auto f2 = run("factorize -q triangle -d " + db.string());
  EXPECT_EQ(f1.out, f2.out);
}

TEST(Cli, Bench) {
  auto csv = temp_path("bench.csv");
  auto r = run("bench --config " + kData + "/bench.cfg -o " + csv.string());
  EXPECT_EQ(r.code, 0);
  auto text = read_file(csv);
  EXPECT_EQ(text.rfind("query,d,tuples,witnesses,method", 0), 0u);
  EXPECT_GT(std::count(text.begin(), text.end(), '\n'), 3);
}
