#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "provfact/database.hpp"
#include "provfact/factorization.hpp"
#include "provfact/generate.hpp"
#include "provfact/query.hpp"
#include "provfact/veo.hpp"

namespace oracle {

// Shortest factorization over every witness-to-plan assignment, built and
// measured by the assembler. Empty when more than `limit` assignments exist.
struct BruteForce {
  long long length = 0;
  std::vector<int> assignment;  // lexicographically first minimum
};

std::optional<BruteForce> brute_force(const provfact::Query& q, const provfact::Database& d,
                                      const provfact::WitnessSet& w, std::uint64_t limit = 1'000'000);

// Size of a largest independent set, by subset enumeration.
int independence_number(const provfact::Graph& g);

// Random database: `tuples` samples per relation over 0..domain-1.
provfact::Database random_database(const provfact::Query& q, int domain, int tuples, std::mt19937_64& rng);

// True if no tuple occurs twice in the expression.
bool read_once(const provfact::Expr& e);

}  // namespace oracle
