#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "provfact/database.hpp"
#include "provfact/exact.hpp"
#include "provfact/factorization.hpp"
#include "provfact/query.hpp"
#include "provfact/special.hpp"

namespace provfact {

enum class Method { Auto, Exact, Flow, Special, Single };

// Throws Error for unknown names.
Method parse_method(std::string_view name);
std::string to_string(Method m);

enum class Optimality { Optimal, Suboptimal, Unknown };

std::string to_string(Optimality o);

struct DispatchOptions {
  Method method = Method::Auto;
  // Ordering for the flow engine: `nested-rp` or `flat:...`.
  std::string order = "nested-rp";
  bool strict_rp = false;
  ExactOptions exact;
  // Settle the optimality of flow and single-plan results with a budgeted
  // exact search when no guarantee applies.
  bool check_optimality = true;
};

struct DispatchResult {
  Factorization fact;
  std::string engine;  // exact, flow, q2star, triangle-unary, two-chain-we, single-plan
  std::string reason;
  Optimality optimality = Optimality::Unknown;
  std::optional<long long> lower_bound;
  std::optional<long long> exact_length;
  std::optional<long long> cut_value;
  std::uint64_t nodes = 0;
  double build_ms = 0;
  double solve_ms = 0;
};

// Best uniform assignment; ties go to the first minimal VEO.
Factorization single_plan_baseline(const Query& q, const Database& d, const WitnessSet& w);

// Engine `auto` picks for a query before looking at the witnesses:
// single-plan, q2star, triangle-unary, two-chain-we, flow or exact.
std::string auto_route(const QueryClass& cls);

// Routes by query class under `auto`:
//   hierarchical -> single plan; two-star, triangle-unary, 2-chain with
//   endpoints -> their dedicated algorithms; two minimal VEOs or read-once
//   witnesses -> flow; otherwise exact under budget, falling back to the
//   better of exact and flow with a lower bound.
DispatchResult dispatch(const Query& q, const Database& d, const WitnessSet& w, const DispatchOptions& opts = {});

// True iff some factorization repeats at most `repeats` literals. Throws Error
// when the exact search cannot settle the question within its budget.
bool fact_decision(const Query& q, const Database& d, long long repeats, const ExactOptions& opts = {});

}  // namespace provfact
