#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provfact {

// Key-value sweep description, one `key = value` per line, `#` comments:
//   queries = triangle, q3star      named queries or inline query text
//   domains = 10                    domain sizes
//   tuples = 5, 10, 20              samples per relation
//   repetitions = 3
//   methods = exact, flow, single
//   time_cap_s = 60                 per exact run
//   node_budget = 20000000
//   seed = 1
//   median = false                  aggregate repetitions by median
struct BenchConfig {
  std::vector<std::string> queries{"triangle"};
  std::vector<int> domains{10};
  std::vector<std::size_t> tuples{5, 10, 20};
  std::size_t repetitions = 3;
  std::vector<std::string> methods{"exact", "flow", "single"};
  double time_cap_s = 60;
  std::uint64_t node_budget = 20'000'000;
  std::uint64_t seed = 1;
  bool median = false;
};

// Throws FormatError.
BenchConfig parse_bench_config(std::string_view text);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchRow {
  std::string query;
  int d = 0;
  std::size_t tuples = 0;   // database size
  std::size_t samples = 0;  // per relation, from the schedule
  std::size_t witnesses = 0;
  std::string method;
  long long length = 0;
  std::string optimal;  // yes, no, unknown
  std::optional<double> penalty_pct;
  double solve_ms = 0;
  double build_ms = 0;
  std::uint64_t nodes = 0;
  std::uint64_t seed = 0;
};

// One row per (instance, method); instances without witnesses are skipped.
std::vector<BenchRow> run_sweep(const BenchConfig& config);

// Median per (query, d, tuple schedule, method) over repetitions.
std::vector<BenchRow> aggregate_median(const std::vector<BenchRow>& rows);

inline constexpr std::string_view kBenchHeader =
    "query,d,tuples,witnesses,method,length,optimal,penalty_pct,solve_ms,build_ms,nodes,seed";

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace provfact
