#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/factorization.hpp"
#include "provfact/query.hpp"

namespace provfact {

struct QueryClass {
  // Subset of: hierarchical, two-mveo, q2star, triangle-unary, two-chain-we,
  // linear, triad; in that order.
  std::vector<std::string> tags;
  std::size_t mveo_count = 0;

  bool has(std::string_view tag) const;
  std::string to_string() const;
};

QueryClass classify(const Query& q);

enum class Shape { Q2Star, TriangleUnary, TwoChainWe };

// Roles of a query matched against a fixed shape, up to renaming.
//   Q2Star:        vars {x, y},    atoms {R(x), S(x,y), T(y)}
//   TriangleUnary: vars {x, y, z}, atoms {U(x), R(x,y), S(y,z), T(z,x)}
//   TwoChainWe:    vars {x, y, z}, atoms {A(x), R(x,y), S(y,z), B(z)}
struct ShapeMatch {
  std::vector<int> vars;
  std::vector<std::size_t> atoms;
};

std::optional<ShapeMatch> match_shape(const Query& q, Shape s);

// Number of witnesses each tuple occurs in.
std::vector<std::size_t> tuple_counts(const Database& d, const WitnessSet& w);

// Roots every edge at a minimum vertex cover of the bipartite witness graph.
// Throws ShapeMismatch.
Factorization solve_q2star(const Query& q, const Database& d, const WitnessSet& w);

// Degree filtering followed by vertex cover on the two decision graphs.
// Throws ShapeMismatch.
Factorization solve_triangle_unary(const Query& q, const Database& d, const WitnessSet& w);

// Witnesses repeating both their R and S tuple take `y <- (x, z)`; the rest
// are cut in a flow graph over the four remaining plans.
// Throws ShapeMismatch.
Factorization solve_two_chain_we(const Query& q, const Database& d, const WitnessSet& w);

}  // namespace provfact
