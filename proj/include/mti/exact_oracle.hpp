#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mti/coupling.hpp"

namespace mti {

/// Instance too large for exhaustive enumeration.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wall-clock budget exhausted.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::size_t max_leaves = 5;
  double timeout_s = 60.0;
};

enum class FamilyKind { kAll, kRooted, kRootedSpecial };

struct FamilyMember {
  PairSet pairs;
  double norm = 0.0;
};

struct CouplingFamily {
  FamilyKind kind = FamilyKind::kAll;
  std::vector<FamilyMember> members;  // sorted by pair set
  std::vector<std::size_t> minimizers;
  double min_norm = 0.0;
};

/// Every coupling of the requested kind.
CouplingFamily enumerate_couplings(const MergeTree& t, const MergeTree& g, FamilyKind kind,
                                   const OracleLimits& limits = {});

struct ExactResult {
  double value = 0.0;
  PairSet witness;  // lexicographically smallest minimizer
  std::size_t visited = 0;
};

/// Minimum cost over all couplings (branch and bound over the enumeration).
ExactResult exact_interleaving(const MergeTree& t, const MergeTree& g, const OracleLimits& limits = {});
/// Minimum over couplings containing the root pair, optionally special only.
/// Returns value +inf and an empty witness when the family is empty.
ExactResult exact_rooted(const MergeTree& t, const MergeTree& g, bool special, const OracleLimits& limits = {});

struct DecompositionReport {
  double exact = 0.0;
  /// Min over antichain matchings of the special extension cost, skipping
  /// matchings that use a pair with no special rooted coupling.
  double special_min_skip = 0.0;
  /// Same, using the single root pair for such pairs.
  double special_min_single = 0.0;
  /// Min of the restricted cost over minimal extensions.
  double low_bound = 0.0;
  std::size_t antichains = 0;
  PairSet best_antichain;

  bool equal_skip(double tol = kTau) const { return std::abs(special_min_skip - exact) <= tol; }
  bool equal_single(double tol = kTau) const { return std::abs(special_min_single - exact) <= tol; }
  bool low_ok(double tol = kTau) const { return low_bound <= exact + tol; }
};

DecompositionReport verify_decomposition(const MergeTree& t, const MergeTree& g, const OracleLimits& limits = {});

}  // namespace mti
