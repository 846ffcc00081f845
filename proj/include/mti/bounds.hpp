#pragma once

#include <optional>
#include <vector>

#include "mti/minmax_program.hpp"
#include "mti/pruning.hpp"

namespace mti {

/// Cost of deleting everything outside T_r and G_{r'}; clamped at 0.
double deletion_penalty(const MergeTree& t, const MergeTree& g, Vertex r, Vertex rp);

/// Test hook: W(x, y) is raised by `amount` right after it is computed, so
/// every later pair sees the inflated value.
struct Injection {
  Vertex x = kNoVertex, y = kNoVertex;
  double amount = 0.0;
};

struct BottomUpOptions {
  Direction direction = Direction::kUp;
  Penalty penalty = Penalty::kRoot;
  std::optional<Injection> inject;
};

struct BottomUpResult {
  CostTable w;
  /// Optimal selection per pair (global ids); leaf pairs keep their base witness.
  std::vector<PairSet> selection;
  std::size_t nodes = 0;

  const PairSet& selected(Vertex x, Vertex y) const { return selection[x * w.cols() + y]; }
};

/// Processing order of Algorithm 1: (lvl x, lvl y, x, y) ascending.
std::vector<Pair> bottom_up_order(const MergeTree& t, const MergeTree& g);

BottomUpResult bottom_up(const MergeTree& t, const MergeTree& g, const BottomUpOptions& opt = {});

/// Coupling assembled from the stored going-up selections for (x, y).
PairSet unwind_witness(const MergeTree& t, const MergeTree& g, const BottomUpResult& up, Vertex x, Vertex y);

struct BoundsOptions {
  Penalty penalty = Penalty::kRoot;
  bool lower = true;
  bool upper = true;
  std::optional<Injection> inject;  // applies to the going-up table
};

struct BoundsResult {
  double d_lower = 0.0, d_upper = 0.0;
  CostTable w_up, w_down, h;
  Pair upper_pair{kNoVertex, kNoVertex}, lower_pair{kNoVertex, kNoVertex};
  PairSet witness;
  double witness_norm = 0.0;  // cost of the witness as a coupling of T and G
  bool witness_special = false;
  double ms_lower = 0.0, ms_upper = 0.0;
  std::size_t nodes = 0;
};

BoundsResult interleaving_bounds(const MergeTree& t, const MergeTree& g, const BoundsOptions& opt = {});

struct DOptResult {
  double value = 0.0;
  double eps = 0.0;
  PruneResult pruned_t, pruned_g;
  BoundsResult bounds;  // on the pruned pair
};

/// max{eps/2, d_upper(P_eps T, P_eps G)} at the smallest eps meeting the leaf budget.
DOptResult d_opt(const MergeTree& t, const MergeTree& g, std::size_t max_leaves, const BoundsOptions& opt = {});

}  // namespace mti
