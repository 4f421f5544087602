#include "provfact/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "provfact/dispatch.hpp"
#include "provfact/error.hpp"
#include "provfact/fixtures.hpp"
#include "provfact/generate.hpp"

namespace provfact {

namespace {

std::string trim(std::string s) {
  auto keep = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), keep));
  s.erase(std::find_if(s.rbegin(), s.rend(), keep).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  int depth = 0;
  for (char c : value) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      if (auto t = trim(item); !t.empty()) out.push_back(t);
      item.clear();
    } else {
      item += c;
    }
  }
  if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof()) throw FormatError("bench config: bad value `" + text + "` for " + key);
  return v;
}

}  // namespace

BenchConfig parse_bench_config(std::string_view text) {
  BenchConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("bench config line " + std::to_string(lineno) + ": expected `key = value`");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto items = split_list(value);
    if (key == "queries") {
      // Atoms after an inline query belong to it.
      c.queries.clear();
      for (const auto& item : items) {
        bool atom = item.find('(') != std::string::npos && item.find(":-") == std::string::npos;
        if (atom && !c.queries.empty() && c.queries.back().find(":-") != std::string::npos)
          c.queries.back() += ", " + item;
        else
          c.queries.push_back(item);
      }
    } else if (key == "domains") {
      c.domains.clear();
      for (const auto& v : items) c.domains.push_back(parse_number<int>(key, v));
    } else if (key == "tuples") {
      c.tuples.clear();
      for (const auto& v : items) c.tuples.push_back(parse_number<std::size_t>(key, v));
    } else if (key == "repetitions") {
      c.repetitions = parse_number<std::size_t>(key, value);
    } else if (key == "methods") {
      for (const auto& m : items) parse_method(m);
      c.methods = items;
    } else if (key == "time_cap_s") {
      c.time_cap_s = parse_number<double>(key, value);
    } else if (key == "node_budget") {
      c.node_budget = parse_number<std::uint64_t>(key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "median") {
      if (value != "true" && value != "false") throw FormatError("bench config: median must be true or false");
      c.median = value == "true";
    } else {
      throw FormatError("bench config line " + std::to_string(lineno) + ": unknown key `" + key + "`");
    }
  }
  return c;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_bench_config(buf.str());
}

namespace {

Query resolve_query(const std::string& spec) {
  if (spec.find(":-") != std::string::npos) return parse_query(spec);
  return named_query(spec);
}

}  // namespace

std::vector<BenchRow> run_sweep(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  std::uint64_t instance = 0;
  for (const auto& spec : config.queries) {
    Query q = resolve_query(spec);
    for (int d : config.domains)
      for (std::size_t samples : config.tuples)
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
          std::uint64_t seed = config.seed * 1'000'003 + instance++;
          auto db = gen_random({q, d, samples, seed});
          auto w = compute_witnesses(q, db);
          if (w.empty()) continue;

          std::optional<long long> exact;
          std::vector<BenchRow> batch;
          for (const auto& name : config.methods) {
            DispatchOptions opts;
            opts.method = parse_method(name);
            opts.check_optimality = false;
            opts.exact.node_budget = config.node_budget;
            opts.exact.deadline =
                std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(config.time_cap_s));
            auto r = dispatch(q, db, w, opts);
            if (r.exact_length) exact = r.exact_length;
            BenchRow row;
            row.query = q.name();
            row.d = d;
            row.tuples = db.tuple_count();
            row.samples = samples;
            row.witnesses = w.size();
            row.method = name;
            row.length = r.fact.length;
            row.optimal = to_string(r.optimality);
            row.solve_ms = r.solve_ms;
            row.build_ms = r.build_ms;
            row.nodes = r.nodes;
            row.seed = seed;
            batch.push_back(std::move(row));
          }
          for (auto& row : batch) {
            if (!exact) continue;
            row.penalty_pct = 100.0 * static_cast<double>(row.length - *exact) / static_cast<double>(*exact);
            if (row.optimal == "unknown") row.optimal = row.length == *exact ? "yes" : "no";
          }
          rows.insert(rows.end(), batch.begin(), batch.end());
        }
  }
  return config.median ? aggregate_median(rows) : rows;
}

namespace {

template <class T>
T median_of(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

}  // namespace

std::vector<BenchRow> aggregate_median(const std::vector<BenchRow>& rows) {
  using Key = std::tuple<std::string, int, std::size_t, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) {
    Key k{r.query, r.d, r.samples, r.method};
    auto [it, fresh] = groups.try_emplace(k);
    if (fresh) order.push_back(k);
    it->second.push_back(&r);
  }
  std::vector<BenchRow> out;
  for (const auto& k : order) {
    const auto& g = groups[k];
    BenchRow m = *g.front();
    std::vector<std::size_t> tuples, witnesses;
    std::vector<long long> length;
    std::vector<double> solve, build, penalty;
    std::vector<std::uint64_t> nodes;
    std::size_t optimal = 0;
    for (const auto* r : g) {
      tuples.push_back(r->tuples);
      witnesses.push_back(r->witnesses);
      length.push_back(r->length);
      solve.push_back(r->solve_ms);
      build.push_back(r->build_ms);
      nodes.push_back(r->nodes);
      if (r->penalty_pct) penalty.push_back(*r->penalty_pct);
      if (r->optimal == "yes") ++optimal;
    }
    m.tuples = median_of(tuples);
    m.witnesses = median_of(witnesses);
    m.length = median_of(length);
    m.solve_ms = median_of(solve);
    m.build_ms = median_of(build);
    m.nodes = median_of(nodes);
    m.penalty_pct = penalty.empty() ? std::nullopt : std::optional<double>(median_of(penalty));
    m.optimal = optimal == g.size() ? "yes" : optimal == 0 ? "no" : "mixed";
    out.push_back(std::move(m));
  }
  return out;
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << kBenchHeader << '\n';
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream num;
  num << std::fixed << std::setprecision(3);
  auto fixed = [&](double v) {
    num.str("");
    num << v;
    return num.str();
  };
  for (const auto& r : rows) {
    out << field(r.query) << ',' << r.d << ',' << r.tuples << ',' << r.witnesses << ',' << r.method << ','
        << r.length << ',' << r.optimal << ',' << (r.penalty_pct ? fixed(*r.penalty_pct) : "") << ','
        << fixed(r.solve_ms) << ',' << fixed(r.build_ms) << ',' << r.nodes << ',' << r.seed << '\n';
  }
}

}  // namespace provfact
