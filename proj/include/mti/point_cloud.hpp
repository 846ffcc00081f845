#pragma once

#include <array>
#include <string>
#include <vector>

#include "mti/merge_tree.hpp"

namespace mti {

/// Finite metric space given by a symmetric distance matrix.
struct PointCloud {
  std::vector<std::vector<double>> dist;

  std::size_t size() const { return dist.size(); }

  static PointCloud from_points(const std::vector<std::array<double, 2>>& points);
  /// Validates symmetry, zero diagonal and nonnegativity.
  static PointCloud from_matrix(std::vector<std::vector<double>> matrix);
  /// Reads `x,y` rows, or a square matrix introduced by a `matrix` header line.
  static PointCloud read_csv(const std::string& path);
};

struct LinkageResult {
  MergeTree tree;
  /// Set when zero-distance points were collapsed into a single leaf.
  bool degenerate = false;
};

/// Single-linkage dendrogram: leaves `p<i>` at height 0, internal vertices
/// `m<k>` at merge heights. Equal-height merges sharing a cluster collapse
/// into one vertex of higher order.
LinkageResult single_linkage_tree(const PointCloud& cloud);

}  // namespace mti
