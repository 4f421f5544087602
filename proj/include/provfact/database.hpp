#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "provfact/query.hpp"

namespace provfact {

// Relations of constant tuples under set semantics. Constants are interned;
// every tuple gets a global id in insertion order.
class Database {
 public:
  struct Relation {
    std::string name;
    std::vector<int> tuples;  // global tuple ids
  };

  int intern(std::string_view constant);
  std::optional<int> find_constant(std::string_view constant) const;
  const std::string& constant(int id) const { return constants_[id]; }
  std::size_t constant_count() const { return constants_.size(); }

  // Creates the relation if needed; returns the id of the (possibly existing) tuple.
  int add_tuple(std::string_view relation, const std::vector<std::string>& values);
  int add_tuple_ids(std::string_view relation, std::vector<int> values);
  void add_relation(std::string_view relation);

  const Relation* relation(std::string_view name) const;
  const std::vector<Relation>& relations() const { return relations_; }

  std::size_t tuple_count() const { return tuple_values_.size(); }
  const std::vector<int>& tuple_values(int tuple) const { return tuple_values_[tuple]; }
  int tuple_relation(int tuple) const { return tuple_relation_[tuple]; }
  // `r_1`, `s_11`; constants joined with '.' when any is longer than one character.
  std::string tuple_label(int tuple) const;

  // Sectioned text format: `[Rel]` headers followed by comma-separated rows.
  void write(std::ostream& out) const;

 private:
  Relation& ensure_relation(std::string_view name);

  std::vector<std::string> constants_;
  std::unordered_map<std::string, int> constant_ids_;
  std::vector<Relation> relations_;
  std::unordered_map<std::string, std::size_t> relation_index_;
  std::vector<std::vector<int>> tuple_values_;
  std::vector<int> tuple_relation_;
  std::vector<std::unordered_map<std::string, int>> row_index_;
};

Database parse_database(std::string_view text);
// A sectioned text file, or a directory of `RelName.csv` files.
Database load_database(const std::filesystem::path& source);

struct Witness {
  std::vector<int> binding;  // constant id per query variable
  std::vector<int> tuples;   // global tuple id per atom
};

struct WitnessSet {
  std::vector<Witness> witnesses;

  std::size_t size() const { return witnesses.size(); }
  bool empty() const { return witnesses.empty(); }
  const Witness& operator[](std::size_t i) const { return witnesses[i]; }
  std::vector<Witness>::const_iterator begin() const { return witnesses.begin(); }
  std::vector<Witness>::const_iterator end() const { return witnesses.end(); }
};

// Orders constants numerically when both are integers, else lexicographically.
bool constant_less(std::string_view a, std::string_view b);

WitnessSet compute_witnesses(const Query& q, const Database& d);

// Keeps the witnesses satisfying `keep`, preserving order.
template <class Pred>
WitnessSet filter_witnesses(const WitnessSet& w, Pred keep) {
  WitnessSet out;
  for (const auto& x : w)
    if (keep(x)) out.witnesses.push_back(x);
  return out;
}

std::string render_witness(const Database& d, const Witness& w);
std::string render_binding(const Query& q, const Database& d, const Witness& w);
std::size_t distinct_tuple_count(const WitnessSet& w);

struct P4Pattern {
  std::size_t w1, w2, w3;
  int r, s;
};

std::optional<P4Pattern> detect_p4(const WitnessSet& w);

}  // namespace provfact
