#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/instances.hpp"
#include "provfact/query.hpp"

namespace provfact {

struct IlpVar {
  enum class Kind { Plan, Prefix };

  Kind kind = Kind::Plan;
  std::string name;
  int witness = -1;   // plan variables; -1 when shared by several witnesses
  int plan = -1;      // plan variables
  int instance = -1;  // prefix variables, id in the plan index
};

struct IlpTerm {
  int var = 0;
  long long coef = 0;
};

// All constraints are `Σ terms >= rhs`.
struct IlpConstraint {
  enum class Kind { Plan, Prefix };

  Kind kind = Kind::Plan;
  std::string name;
  std::vector<IlpTerm> terms;
  long long rhs = 0;
};

struct IlpModel {
  std::string query;
  std::vector<IlpVar> vars;
  std::vector<IlpTerm> objective;
  long long constant = 0;
  std::vector<IlpConstraint> constraints;
  std::size_t n = 0;  // witnesses
  std::size_t k = 0;  // minimal plans
  std::size_t m = 0;  // atoms
  bool reduced = false;
};

struct IlpOptions {
  // Folds prefixes binding every variable into the constant when all plans
  // weigh them equally, and identifies chain plans by their two-node prefix.
  bool reduce = false;
};

// Throws EmptyWitnessSet.
IlpModel build_ilp(const Query& q, const Database& d, const WitnessSet& w, const IlpOptions& opts = {});

// CPLEX LP text: Minimize / Subject To / Binaries / End.
void export_lp(const IlpModel& m, std::ostream& out);
std::string export_lp(const IlpModel& m);

struct IlpStats {
  std::size_t vars = 0;
  std::size_t plan_vars = 0;
  std::size_t prefix_vars = 0;
  std::size_t objective_vars = 0;
  std::size_t constraints = 0;
  std::size_t plan_constraints = 0;
  std::size_t prefix_constraints = 0;
  std::size_t n = 0, k = 0, m = 0;
  long long constant = 0;
  // n(1 + km)
  std::size_t constraint_bound = 0;
  bool within_bound = true;
};

IlpStats model_stats(const IlpModel& m);

// Optimum of a small model by enumerating one plan variable per plan
// constraint. Throws ExpansionTooLarge beyond `max_combinations`.
long long solve_ilp_model(const IlpModel& m, std::size_t max_combinations = 1'000'000);

}  // namespace provfact
