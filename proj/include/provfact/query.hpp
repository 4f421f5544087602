#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provfact {

// Bitmask over a query's variable indices.
using VarSet = std::uint32_t;

inline constexpr std::size_t kMaxQueryVars = 32;

inline int popcount(VarSet s) { return __builtin_popcount(s); }

struct Atom {
  std::string relation;
  std::vector<std::string> vars;
};

struct ParseOptions {
  bool allow_duplicate_vars = false;
  bool allow_disconnected = false;
};

// Self-join-free Boolean conjunctive query. Variables are indexed in order
// of first appearance.
class Query {
 public:
  Query() = default;
  Query(std::string name, std::vector<Atom> atoms, const ParseOptions& opts = {});

  const std::string& name() const { return name_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_[i]; }
  std::size_t atom_count() const { return atoms_.size(); }

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t var_count() const { return vars_.size(); }
  const std::string& var_name(int index) const { return vars_[index]; }
  // -1 if the variable does not occur.
  int var_index(std::string_view name) const;

  VarSet atom_vars(std::size_t i) const { return atom_masks_[i]; }
  // Positions of the atom's arguments as variable indices.
  const std::vector<int>& atom_var_indices(std::size_t i) const { return atom_var_idx_[i]; }
  VarSet all_vars() const;
  std::optional<std::size_t> atom_index(std::string_view relation) const;

  bool connected() const;
  std::string to_string() const;

 private:
  std::string name_;
  std::vector<Atom> atoms_;
  std::vector<std::string> vars_;
  std::vector<VarSet> atom_masks_;
  std::vector<std::vector<int>> atom_var_idx_;
};

Query parse_query(std::string_view text, const ParseOptions& opts = {});
Query load_query(const std::filesystem::path& path, const ParseOptions& opts = {});

// Indices of the atoms containing variable `x`.
std::vector<std::size_t> atoms_of(const Query& q, std::string_view x);

bool is_hierarchical(const Query& q);

// Atoms g with no other atom g' such that var(g') is a strict subset of var(g).
std::vector<std::size_t> independent_atoms(const Query& q);

// True if two distinct atoms have identical variable sets.
bool has_equal_var_sets(const Query& q);

std::optional<std::array<std::size_t, 3>> has_triad(const Query& q);

bool is_linear(const Query& q);

// Connected components of the atom/variable incidence graph, each as a query
// named `<name>#<i>`.
std::vector<Query> connected_components(const Query& q);

// Variable names of a set, in variable-index order.
std::vector<std::string> var_names(const Query& q, VarSet s);

}  // namespace provfact
