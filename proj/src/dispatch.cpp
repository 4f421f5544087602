#include "provfact/dispatch.hpp"

#include <chrono>

#include "provfact/error.hpp"
#include "provfact/flow.hpp"
#include "provfact/instances.hpp"
#include "provfact/ordering.hpp"

namespace provfact {

Method parse_method(std::string_view name) {
  if (name == "auto") return Method::Auto;
  if (name == "exact") return Method::Exact;
  if (name == "flow") return Method::Flow;
  if (name == "special") return Method::Special;
  if (name == "single" || name == "single-plan") return Method::Single;
  throw Error("unknown method `" + std::string(name) + "` (auto, exact, flow, special, single)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto:
      return "auto";
    case Method::Exact:
      return "exact";
    case Method::Flow:
      return "flow";
    case Method::Special:
      return "special";
    case Method::Single:
      return "single";
  }
  return "?";
}

std::string to_string(Optimality o) {
  switch (o) {
    case Optimality::Optimal:
      return "yes";
    case Optimality::Suboptimal:
      return "no";
    case Optimality::Unknown:
      return "unknown";
  }
  return "?";
}

Factorization single_plan_baseline(const Query& q, const Database& d, const WitnessSet& w) {
  auto plans = enumerate_mveo(q);
  auto ix = build_plan_index(q, w, plans);
  int best = 0;
  long long best_cost = -1;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    long long c = ix.cost(std::vector<int>(w.size(), static_cast<int>(p)));
    if (best_cost < 0 || c < best_cost) {
      best_cost = c;
      best = static_cast<int>(p);
    }
  }
  return assemble_uniform(q, d, w, plans, best);
}

std::string auto_route(const QueryClass& cls) {
  if (cls.has("hierarchical")) return "single-plan";
  for (const char* tag : {"q2star", "triangle-unary", "two-chain-we"})
    if (cls.has(tag)) return tag;
  if (cls.has("two-mveo")) return "flow";
  return "exact";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

void run_exact(const Query& q, const Database& d, const WitnessSet& w, const DispatchOptions& opts,
               DispatchResult& r) {
  auto t0 = Clock::now();
  auto ix = build_plan_index(q, w, enumerate_mveo(q));
  r.build_ms += ms_since(t0);
  auto t1 = Clock::now();
  auto s = solve_exact(ix, opts.exact);
  r.fact = assemble(q, d, w, ix.plans, s.assignment);
  r.solve_ms += ms_since(t1);
  r.engine = "exact";
  r.nodes += s.nodes;
  r.lower_bound = s.lower_bound;
  r.optimality = s.optimal ? Optimality::Optimal : Optimality::Unknown;
  if (s.optimal) r.exact_length = s.cost;
}

// Returns whether the ordering has running prefixes.
bool run_flow(const Query& q, const Database& d, const WitnessSet& w, const DispatchOptions& opts,
              DispatchResult& r) {
  auto t0 = Clock::now();
  auto ordering = ordering_from_spec(q, enumerate_mveo(q), opts.order);
  auto g = build_flow_graph(q, d, w, ordering, opts.strict_rp);
  r.build_ms += ms_since(t0);
  auto t1 = Clock::now();
  auto cut = min_cut(g);
  auto f = extract_factorization(q, d, w, g, cut);
  r.solve_ms += ms_since(t1);
  r.fact = std::move(f.fact);
  r.cut_value = f.cut_value;
  r.engine = "flow";
  return ordering.rp;
}

void run_special(const Query& q, const Database& d, const WitnessSet& w, DispatchResult& r) {
  auto t0 = Clock::now();
  if (match_shape(q, Shape::Q2Star)) {
    r.fact = solve_q2star(q, d, w);
    r.engine = "q2star";
  } else if (match_shape(q, Shape::TriangleUnary)) {
    r.fact = solve_triangle_unary(q, d, w);
    r.engine = "triangle-unary";
  } else if (match_shape(q, Shape::TwoChainWe)) {
    r.fact = solve_two_chain_we(q, d, w);
    r.engine = "two-chain-we";
  } else {
    throw ShapeMismatch(q.name() + " matches no query with a dedicated algorithm");
  }
  r.solve_ms += ms_since(t0);
}

void run_single(const Query& q, const Database& d, const WitnessSet& w, DispatchResult& r) {
  auto t0 = Clock::now();
  r.fact = single_plan_baseline(q, d, w);
  r.solve_ms += ms_since(t0);
  r.engine = "single-plan";
}

// Compares against a budgeted exact search when no guarantee is known.
void settle(const Query& q, const WitnessSet& w, const DispatchOptions& opts, DispatchResult& r) {
  if (r.optimality != Optimality::Unknown || !opts.check_optimality) return;
  auto ix = build_plan_index(q, w, enumerate_mveo(q));
  auto s = solve_exact(ix, opts.exact);
  r.nodes += s.nodes;
  r.lower_bound = s.lower_bound;
  if (s.optimal) {
    r.exact_length = s.cost;
    r.optimality = s.cost == r.fact.length ? Optimality::Optimal : Optimality::Suboptimal;
  } else if (s.lower_bound == r.fact.length) {
    r.optimality = Optimality::Optimal;
  }
}

}  // namespace

DispatchResult dispatch(const Query& q, const Database& d, const WitnessSet& w, const DispatchOptions& opts) {
  DispatchResult r;
  switch (opts.method) {
    case Method::Exact:
      r.reason = "requested";
      run_exact(q, d, w, opts, r);
      return r;
    case Method::Flow: {
      r.reason = "requested";
      bool rp = run_flow(q, d, w, opts, r);
      if (rp && (enumerate_mveo(q).size() <= 2 || !detect_p4(w))) r.optimality = Optimality::Optimal;
      settle(q, w, opts, r);
      return r;
    }
    case Method::Special:
      r.reason = "requested";
      run_special(q, d, w, r);
      r.optimality = Optimality::Optimal;
      return r;
    case Method::Single:
      r.reason = "requested";
      run_single(q, d, w, r);
      if (enumerate_mveo(q).size() == 1) r.optimality = Optimality::Optimal;
      settle(q, w, opts, r);
      return r;
    case Method::Auto:
      break;
  }

  auto cls = classify(q);
  if (cls.has("hierarchical")) {
    r.reason = "hierarchical";
    run_single(q, d, w, r);
    r.optimality = Optimality::Optimal;
    return r;
  }
  if (cls.has("q2star") || cls.has("triangle-unary") || cls.has("two-chain-we")) {
    r.reason = "dedicated algorithm";
    run_special(q, d, w, r);
    r.optimality = Optimality::Optimal;
    return r;
  }
  DispatchOptions flow_opts = opts;
  flow_opts.order = "nested-rp";
  if (cls.has("two-mveo")) {
    r.reason = "two minimal VEOs";
    run_flow(q, d, w, flow_opts, r);
    r.optimality = Optimality::Optimal;
    return r;
  }
  if (!detect_p4(w)) {
    r.reason = "read-once";
    run_flow(q, d, w, flow_opts, r);
    r.optimality = Optimality::Optimal;
    return r;
  }
  r.reason = cls.has("triad") ? "triad" : "linear";
  run_exact(q, d, w, opts, r);
  if (r.optimality == Optimality::Optimal) return r;

  // Budget exhausted: keep the better of the exact incumbent and the flow cut.
  DispatchResult flow;
  run_flow(q, d, w, flow_opts, flow);
  r.build_ms += flow.build_ms;
  r.solve_ms += flow.solve_ms;
  r.cut_value = flow.cut_value;
  if (flow.fact.length < r.fact.length) {
    r.fact = std::move(flow.fact);
    r.engine = "flow";
  }
  if (r.lower_bound && *r.lower_bound == r.fact.length) r.optimality = Optimality::Optimal;
  return r;
}

bool fact_decision(const Query& q, const Database& d, long long repeats, const ExactOptions& opts) {
  auto w = compute_witnesses(q, d);
  if (w.empty()) return true;
  auto distinct = static_cast<long long>(distinct_tuple_count(w));
  auto ex = solve_exact(q, d, w, opts);
  if (ex.fact.length - distinct <= repeats) return true;
  if (ex.search.optimal || ex.search.lower_bound - distinct > repeats) return false;
  throw Error("search budget exhausted before deciding");
}

}  // namespace provfact
