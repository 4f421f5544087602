#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "provfact/bench.hpp"
#include "provfact/database.hpp"
#include "provfact/dispatch.hpp"
#include "provfact/error.hpp"
#include "provfact/fixtures.hpp"
#include "provfact/flow.hpp"
#include "provfact/generate.hpp"
#include "provfact/ilp.hpp"
#include "provfact/ordering.hpp"
#include "provfact/special.hpp"
#include "provfact/veo.hpp"

namespace fs = std::filesystem;
using namespace provfact;

namespace {

struct Globals {
  bool ascii = false;
  bool verbose = false;
  bool strict_rp = false;
};

// A query file, or the name of a built-in query.
Query resolve_query(const std::string& arg) {
  if (fs::exists(arg)) return load_query(arg);
  for (const auto& nq : named_queries())
    if (nq.name == arg) return parse_query(nq.text);
  throw IoError("no query file or built-in query named " + arg);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

int cmd_mveo(const Globals& g, const std::string& query, bool ordering, bool all) {
  auto q = resolve_query(query);
  auto plans = enumerate_mveo(q);
  for (const auto& v : all ? enumerate_veos(q) : plans) {
    std::cout << v.str() << '\n';
    if (!g.verbose) continue;
    for (const auto& p : table_prefixes(v, q)) {
      std::cout << "  " << render_path(q, p.path) << "  c=" << p.weight << "  [";
      for (std::size_t i = 0; i < p.atoms.size(); ++i) std::cout << (i ? " " : "") << q.atom(p.atoms[i]).relation;
      std::cout << "]\n";
    }
  }
  if (ordering) std::cout << "ordering: " << build_ordering(q, plans).to_string(g.ascii) << '\n';
  return 0;
}

int cmd_classify(const std::string& query) {
  auto q = resolve_query(query);
  auto cls = classify(q);
  std::cout << "query: " << q.to_string() << '\n'
            << "mveo: " << cls.mveo_count << '\n'
            << "tags: " << cls.to_string() << '\n'
            << "route: " << auto_route(cls) << '\n';
  return 0;
}

int cmd_witnesses(const std::string& query, const std::string& db) {
  auto q = resolve_query(query);
  auto d = load_database(db);
  auto w = compute_witnesses(q, d);
  std::cout << "witnesses: " << w.size() << '\n';
  for (std::size_t i = 0; i < w.size(); ++i)
    std::cout << "w" << i + 1 << ": " << render_witness(d, w[i]) << "  " << render_binding(q, d, w[i]) << '\n';
  if (auto p4 = detect_p4(w))
    std::cout << "read-once: no (w" << p4->w1 + 1 << ", w" << p4->w2 + 1 << ", w" << p4->w3 + 1 << ")\n";
  else
    std::cout << "read-once: yes\n";
  return 0;
}

struct FactorizeArgs {
  std::string query, db, method = "auto", order = "nested-rp", dump;
  std::uint64_t budget = 20'000'000;
  double time_limit = 0;
};

int cmd_factorize(const Globals& g, const FactorizeArgs& a) {
  auto q = resolve_query(a.query);
  auto d = load_database(a.db);
  auto w = compute_witnesses(q, d);
  DispatchOptions opts;
  opts.method = parse_method(a.method);
  opts.order = a.order;
  opts.strict_rp = g.strict_rp;
  opts.exact.node_budget = a.budget;
  if (a.time_limit > 0)
    opts.exact.deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(a.time_limit));
  auto r = dispatch(q, d, w, opts);

  if (!a.dump.empty()) {
    auto ordering = ordering_from_spec(q, enumerate_mveo(q), a.order);
    auto graph = build_flow_graph(q, d, w, ordering, g.strict_rp);
    auto cut = min_cut(graph);
    auto out = open_output(a.dump);
    write_dot(graph, out, &cut);
  }

  std::string verified;
  try {
    verified = verify_equivalence(r.fact, w) ? "yes" : "NO";
  } catch (const ExpansionTooLarge&) {
    verified = "skipped";
  }
  std::cout << "query: " << q.to_string() << '\n'
            << "witnesses: " << w.size() << '\n'
            << "method: " << r.engine << " (" << r.reason << ")\n"
            << "length: " << r.fact.length << '\n'
            << "repeats: " << r.fact.repeats << '\n'
            << "optimal: " << to_string(r.optimality) << '\n';
  if (r.cut_value) std::cout << "cut: " << *r.cut_value << '\n';
  if (r.exact_length && *r.exact_length != r.fact.length) std::cout << "exact: " << *r.exact_length << '\n';
  if (r.optimality == Optimality::Unknown && r.lower_bound) std::cout << "lower bound: " << *r.lower_bound << '\n';
  std::cout << "verified: " << verified << '\n'
            << "expression: " << render_expression(d, r.fact.expression, g.ascii) << '\n';
  if (g.verbose) {
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(3);
    t << "nodes: " << r.nodes << "\nbuild_ms: " << r.build_ms << "\nsolve_ms: " << r.solve_ms << '\n';
    std::cout << t.str();
  }
  if (verified == "NO") throw Error("factorization is not equivalent to the provenance");
  return r.optimality == Optimality::Unknown ? 2 : 0;
}

int cmd_ilp(const std::string& query, const std::string& db, bool reduce, const std::string& output) {
  auto q = resolve_query(query);
  auto d = load_database(db);
  auto w = compute_witnesses(q, d);
  IlpOptions opts;
  opts.reduce = reduce;
  auto m = build_ilp(q, d, w, opts);
  if (output.empty()) {
    export_lp(m, std::cout);
    return 0;
  }
  auto out = open_output(output);
  export_lp(m, out);
  auto s = model_stats(m);
  std::cout << "variables: " << s.vars << " (" << s.plan_vars << " plan, " << s.prefix_vars << " prefix)\n"
            << "constraints: " << s.constraints << " (" << s.plan_constraints << " plan, " << s.prefix_constraints
            << " prefix)\n"
            << "bound n(1+km): " << s.constraint_bound << (s.within_bound ? "" : " EXCEEDED") << '\n';
  if (s.constant) std::cout << "constant: " << s.constant << '\n';
  return 0;
}

struct GenArgs {
  bool random = false;
  std::string gadget, query, graph, output;
  int domain = 10;
  std::size_t tuples = 10;
  std::optional<std::uint64_t> seed;
};

int cmd_gen(const GenArgs& a) {
  Database d;
  if (a.random == !a.gadget.empty()) throw Error("gen needs exactly one of --random and --gadget");
  if (a.random) {
    if (a.query.empty()) throw Error("gen --random needs -q");
    if (!a.seed) throw Error("gen --random needs --seed");
    d = gen_random({resolve_query(a.query), a.domain, a.tuples, *a.seed});
  } else {
    if (a.graph.empty()) throw Error("gen --gadget needs --graph");
    auto graph = load_edge_list(a.graph);
    if (a.gadget == "3star")
      d = gen_3star_gadget(graph);
    else if (a.gadget == "triad")
      d = gen_triad_gadget(resolve_query(a.query.empty() ? "triangle" : a.query), graph);
    else
      throw Error("unknown gadget `" + a.gadget + "` (3star, triad)");
  }
  if (a.output.empty()) {
    d.write(std::cout);
  } else {
    auto out = open_output(a.output);
    d.write(out);
  }
  return 0;
}

int cmd_bench(const std::string& config, const std::string& output, bool median) {
  auto c = config.empty() ? BenchConfig{} : load_bench_config(config);
  if (median) c.median = true;
  auto rows = run_sweep(c);
  if (output.empty()) {
    write_csv(rows, std::cout);
  } else {
    auto out = open_output(output);
    write_csv(rows, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal factorizations of conjunctive query provenance"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--ascii", g.ascii, "ASCII operators in output");
  app.add_flag("--verbose", g.verbose, "Search statistics, timings and prefix tables");
  app.add_flag("--strict-rp", g.strict_rp, "Reject orderings without running prefixes");

  std::string query, db, output;
  bool ordering = false;
  auto* mveo = app.add_subcommand("mveo", "Minimal variable elimination orders");
  mveo->add_option("-q,--query", query, "Query file or built-in name")->required();
  mveo->add_flag("--ordering", ordering, "Also print the nested running-prefixes ordering");
  bool all_veos = false;
  mveo->add_flag("--all-veos", all_veos, "Print every legal VEO instead of the minimal ones");

  auto* cls = app.add_subcommand("classify", "Query class tags and the engine auto would use");
  cls->add_option("-q,--query", query, "Query file or built-in name")->required();

  auto* wit = app.add_subcommand("witnesses", "Witnesses of a query over a database");
  wit->add_option("-q,--query", query, "Query file or built-in name")->required();
  wit->add_option("-d,--db", db, "Database file or directory")->required();

  FactorizeArgs fa;
  auto* fact = app.add_subcommand("factorize", "Factorize the provenance");
  fact->add_option("-q,--query", fa.query, "Query file or built-in name")->required();
  fact->add_option("-d,--db", fa.db, "Database file or directory")->required();
  fact->add_option("--method", fa.method, "auto, exact, flow, special or single")->capture_default_str();
  fact->add_option("--order", fa.order, "Flow ordering: nested-rp or flat:v1,v2,...")->capture_default_str();
  fact->add_option("--budget", fa.budget, "Exact search node budget")->capture_default_str();
  fact->add_option("--time-limit", fa.time_limit, "Exact search wall-clock limit in seconds");
  fact->add_option("--dump-graph", fa.dump, "Write the flow graph in DOT format");

  bool reduce = false;
  auto* ilp = app.add_subcommand("ilp", "Export the integer program in LP format");
  ilp->add_option("-q,--query", query, "Query file or built-in name")->required();
  ilp->add_option("-d,--db", db, "Database file or directory")->required();
  ilp->add_flag("--reduce", reduce, "Fold full-variable prefixes and use two-node plan shorthand");
  ilp->add_option("-o,--output", output, "LP file (stdout if omitted)");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a database");
  gen->add_flag("--random", ga.random, "Uniform random tuples");
  gen->add_option("--gadget", ga.gadget, "3star or triad");
  gen->add_option("-q,--query", ga.query, "Query file or built-in name");
  gen->add_option("-d,--domain", ga.domain, "Domain size")->capture_default_str();
  gen->add_option("--tuples", ga.tuples, "Samples per relation")->capture_default_str();
  gen->add_option("--seed", ga.seed, "Random seed");
  gen->add_option("--graph", ga.graph, "Edge list, one `u v` per line");
  gen->add_option("-o,--output", ga.output, "Database file (stdout if omitted)");

  std::string config;
  bool median = false;
  auto* bench = app.add_subcommand("bench", "Compare methods over generated instances");
  bench->add_option("--config", config, "Sweep description (key = value lines)");
  bench->add_option("-o,--output", output, "CSV file (stdout if omitted)");
  bench->add_flag("--median", median, "Aggregate repetitions by median");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*mveo) return cmd_mveo(g, query, ordering, all_veos);
    if (*cls) return cmd_classify(query);
    if (*wit) return cmd_witnesses(query, db);
    if (*fact) return cmd_factorize(g, fa);
    if (*ilp) return cmd_ilp(query, db, reduce, output);
    if (*gen) return cmd_gen(ga);
    if (*bench) return cmd_bench(config, output, median);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
