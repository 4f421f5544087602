#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provfact/query.hpp"
#include "provfact/veo.hpp"

namespace provfact {

// One element of an ordering list. A Plan entry stands for one minimal VEO;
// a SubPlan entry stands for the plans sharing one subtree inside a product;
// a Product entry splits into parallel sub-lists, one per independent branch.
struct OrderingEntry {
  enum class Kind { Plan, SubPlan, Product };

  Kind kind = Kind::Plan;
  int plan = -1;
  std::string label;
  // Rendered root path above a product, e.g. `x <- u`.
  std::string context;
  std::vector<int> parallel;  // list ids
  std::vector<int> cover;     // sorted plan indices
};

struct OrderingList {
  std::vector<OrderingEntry> entries;
};

// Contiguous range of entries [first, last] in one list.
struct Span {
  int list = 0;
  int first = 0;
  int last = 0;
};

struct Ordering {
  std::vector<Veo> plans;
  std::vector<OrderingList> lists;  // list 0 is the top level
  bool nested = false;
  bool rp = false;

  // Plan indices in the order the extraction scans them.
  std::vector<int> flatten() const;
  std::string to_string(bool ascii = false) const;
  // Where the prefix shared by exactly `plan_set` (sorted) is attached, if
  // the running-prefixes property holds for it.
  std::optional<Span> locate(const std::vector<int>& plan_set) const;
  // The top-level range touching `plan_set`; used when locate fails.
  Span fallback_span(const std::vector<int>& plan_set) const;
};

// Nested running-prefixes ordering: groups by root node, recursing below it,
// with parallel sub-orderings where the remaining branches are independent.
Ordering build_ordering(const Query& q, std::vector<Veo> plans);

// Flat ordering from a permutation of plan indices (0-based).
// Throws InvalidPermutation.
Ordering build_flat_ordering(const Query& q, std::vector<Veo> plans, const std::vector<int>& perm);

// `nested-rp` or `flat:v1,v3,v2` (1-based plan numbers).
Ordering ordering_from_spec(const Query& q, std::vector<Veo> plans, std::string_view spec);

// True iff every table-prefix path spans a contiguous range.
bool check_rp(const Ordering& o, const Query& q);

}  // namespace provfact
