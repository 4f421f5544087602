#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/query.hpp"

namespace provfact {

struct NamedQuery {
  std::string name;
  std::string text;
};

// q2star, q3star, 2chain, 3chain, triangle, triangle-unary, 2chain-we, 6cycle-we.
const std::vector<NamedQuery>& named_queries();

// Throws Error for unknown names.
Query named_query(std::string_view name);

// Two-star instance: R = T = {1, 2, 3}, S = {11, 12, 23, 33} and optionally 13.
Database two_star_database(bool with_s13);

// 3-chain: R = {11}, S = {11}, T = {11, 12}.
Database three_chain_database();

// Triangle: R = {00, 01}, S = {00, 10}, T = {00}.
Database triangle_database();

// Triangle witnesses r0s0t0, r1s1t0, r2s1t1, r2s2t2.
Database leakage_database();

}  // namespace provfact
