#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/query.hpp"
#include "provfact/veo.hpp"

namespace provfact {

// Monotone Boolean expression over tuple literals.
struct Expr {
  enum class Kind { False, Literal, And, Or };

  Kind kind = Kind::False;
  int tuple = -1;
  std::vector<Expr> children;

  static Expr literal(int tuple);
  // Collapse single children and flatten nested operators of the same kind.
  static Expr conj(std::vector<Expr> items);
  static Expr disj(std::vector<Expr> items);
};

std::size_t literal_count(const Expr& e);
std::size_t distinct_literal_count(const Expr& e);

// Infix form: juxtaposition for AND, `∨` (or ` v ` when `ascii`) for OR.
std::string render_expression(const Database& d, const Expr& e, bool ascii = false);

struct Factorization {
  std::vector<Veo> plans;
  std::vector<int> assignment;  // plan index per witness
  Expr expression;
  long long length = 0;
  long long repeats = 0;  // length minus distinct literals
};

// Builds the factorized expression of an assignment by sharing equal prefix
// instances. Throws IllegalAssignment.
Factorization assemble(const Query& q, const Database& d, const WitnessSet& w,
                       const std::vector<Veo>& plans, const std::vector<int>& assignment);

// Assigns every witness the same plan.
Factorization assemble_uniform(const Query& q, const Database& d, const WitnessSet& w,
                               const std::vector<Veo>& plans, int plan);

using Term = std::vector<int>;  // sorted tuple ids

// Distributes the expression into its product terms. Throws ExpansionTooLarge.
std::set<Term> expand(const Expr& e, std::size_t max_terms = 1'000'000);

// True iff the expression's terms are exactly the witnesses' tuple sets.
bool verify_equivalence(const Expr& e, const WitnessSet& w, std::size_t max_terms = 1'000'000);
bool verify_equivalence(const Factorization& f, const WitnessSet& w,
                        std::size_t max_terms = 1'000'000);

}  // namespace provfact
