#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "provfact/factorization.hpp"
#include "provfact/instances.hpp"

namespace provfact {

struct ExactOptions {
  // Search nodes across all components before giving up optimality.
  std::uint64_t node_budget = 20'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Second pass that picks the lexicographically first optimal assignment.
  bool tie_break = true;
};

struct ExactResult {
  std::vector<int> assignment;
  long long cost = 0;
  bool optimal = true;
  std::uint64_t nodes = 0;
  // Proven lower bound on the optimum; equals `cost` when optimal.
  long long lower_bound = 0;
};

// Branch and bound over witness-to-plan assignments of the index.
ExactResult solve_exact(const PlanIndex& ix, const ExactOptions& opts = {});

// Admissible bound over a subset of witnesses: instances present in every
// plan of a witness, plus per witness the cheapest weight of instances that
// bind all query variables.
long long lower_bound(const PlanIndex& ix, const std::vector<int>& witnesses, VarSet all_vars);

// Witness order, cheapest incremental plan first, followed by single-witness
// improvement moves until none helps.
std::vector<int> greedy_assignment(const PlanIndex& ix);

struct ExactFactorization {
  Factorization fact;
  ExactResult search;
};

ExactFactorization solve_exact(const Query& q, const Database& d, const WitnessSet& w,
                               const ExactOptions& opts = {});

}  // namespace provfact
