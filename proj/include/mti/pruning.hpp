#pragma once

#include <string>
#include <vector>

#include "mti/coupling.hpp"

namespace mti {

struct RemovalStep {
  std::string leaf;
  double gap = 0.0;
  std::string father;   // collapsed order-2 father, empty when none
  bool root_promoted = false;
};

struct PruneResult {
  MergeTree tree;
  std::vector<Vertex> to_original;  // vertex of `tree` -> vertex of the input
  PairSet pairs;                    // C_eps as (pruned, original) pairs
  std::vector<RemovalStep> log;
  double eps = 0.0;
  bool degenerate = false;          // single vertex left
};

/// P_eps: repeatedly drops the leaf with the smallest gap to its father while
/// that gap is below eps, collapsing fathers left with one child.
PruneResult prune(const MergeTree& t, double eps);

/// C_eps as a validated coupling between result.tree and the input tree.
Coupling pruning_coupling(const PruneResult& r, const MergeTree& original);

struct PruningLemmaReport {
  bool coupling_valid = false;
  bool leaves_kept = false;
  bool removed_lambda = false;
  bool eta_lower = false;
  bool cost_ok = false;
  double norm = 0.0;
  std::vector<std::string> failures;

  bool pass() const { return coupling_valid && leaves_kept && removed_lambda && eta_lower && cost_ok; }
};

/// Checks the five properties of C_eps, collecting witnesses for failures.
PruningLemmaReport check_pruning_lemma(const MergeTree& t, const PruneResult& r);

/// All leaf-to-ancestor height differences, sorted and deduplicated; P_eps
/// only changes when eps crosses one of them.
std::vector<double> pruning_breakpoints(const MergeTree& t);

struct BudgetPrune {
  double eps = 0.0;
  PruneResult result;
};

/// Smallest eps (just above a breakpoint) with at most max_leaves leaves left.
BudgetPrune prune_to_leaf_budget(const MergeTree& t, std::size_t max_leaves);

}  // namespace mti
