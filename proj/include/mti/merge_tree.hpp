#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mti {

/// Index of a vertex inside a MergeTree. Indices follow the lexicographic
/// order of the vertex ids, so iterating by index is the canonical tie-break.
using Vertex = std::size_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

/// Absolute tolerance used by assertions and checkers.
inline constexpr double kTau = 1e-9;

/// Raised for malformed trees; `vertices` names the offending ids.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> vertices)
      : std::runtime_error(what), vertices_(std::move(vertices)) {}
  const std::vector<std::string>& vertices() const { return vertices_; }

 private:
  std::vector<std::string> vertices_;
};

struct VertexRecord {
  std::string id;
  double height = 0.0;
  std::optional<std::string> parent;
};

enum class Strictness {
  kRelaxed,  // root order 1 / single vertex allowed, ties allowed
  kStrict,   // root order > 1 (unless single vertex) and pairwise distinct heights
};

/// A finite rooted tree with strictly increasing heights towards the root.
/// Immutable after construction.
class MergeTree {
 public:
  static MergeTree from_records(std::vector<VertexRecord> records,
                                Strictness strictness = Strictness::kRelaxed);

  std::size_t size() const { return ids_.size(); }
  Vertex root() const { return root_; }
  const std::string& id(Vertex v) const { return ids_[v]; }
  double height(Vertex v) const { return heights_[v]; }
  Vertex parent(Vertex v) const { return parents_[v]; }
  const std::vector<Vertex>& children(Vertex v) const { return children_[v]; }
  bool is_leaf(Vertex v) const { return children_[v].empty(); }
  bool is_root(Vertex v) const { return v == root_; }
  const std::vector<Vertex>& leaves() const { return leaves_; }
  /// Children before parents.
  const std::vector<Vertex>& postorder() const { return postorder_; }

  /// Whether all heights are pairwise distinct (assumption (G)).
  bool generic() const { return generic_; }
  /// True for single-vertex trees and trees whose root has one child.
  bool degenerate() const;

  std::optional<Vertex> find(const std::string& id) const;
  /// Throws ValidationError for unknown ids.
  Vertex at(const std::string& id) const;

  /// u <= v in the tree order (v is an ancestor of u or u itself).
  bool leq(Vertex u, Vertex v) const {
    return tin_[v] <= tin_[u] && tout_[u] <= tout_[v];
  }
  bool less(Vertex u, Vertex v) const { return u != v && leq(u, v); }
  bool comparable(Vertex u, Vertex v) const { return leq(u, v) || leq(v, u); }

  Vertex lca(Vertex u, Vertex v) const {
    return lca_table_.empty() ? lca_walk(u, v) : lca_table_[u * ids_.size() + v];
  }
  /// Least common ancestor of a nonempty vertex set.
  Vertex lca(std::span<const Vertex> vs) const;

  std::size_t depth(Vertex v) const { return depth_[v]; }
  /// Lowest height in sub(v) and the vertex attaining it.
  double subtree_min_height(Vertex v) const { return sub_min_[v]; }
  Vertex subtree_argmin(Vertex v) const { return sub_argmin_[v]; }
  Vertex argmin_height() const { return sub_argmin_[root_]; }

  double min_height() const { return sub_min_[root_]; }
  double max_height() const { return heights_[root_]; }
  double height_span() const { return max_height() - min_height(); }
  /// Snapping tolerance for points of the metric tree.
  double snap_tolerance() const { return snap_tol_; }

  /// Number of vertices in sub(v), v included.
  std::size_t subtree_size(Vertex v) const { return (tout_[v] - tin_[v]) / 2 + 1; }

  /// Vertices of sub(v) in index order.
  std::vector<Vertex> subtree_vertices(Vertex v) const;

  /// sub(v) as a standalone tree; `to_parent[i]` maps its vertex i back.
  MergeTree subtree(Vertex v, std::vector<Vertex>* to_parent = nullptr) const;

  std::vector<VertexRecord> records() const;

  /// Same structure with replaced heights (validated, relaxed).
  MergeTree with_heights(const std::vector<double>& heights) const;

 private:
  void finalize();
  Vertex lca_walk(Vertex u, Vertex v) const;

  std::vector<std::string> ids_;
  std::vector<double> heights_;
  std::vector<Vertex> parents_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<Vertex> leaves_;
  std::vector<Vertex> postorder_;
  std::vector<std::size_t> tin_, tout_, depth_;
  std::vector<double> sub_min_;
  std::vector<Vertex> sub_argmin_;
  std::vector<Vertex> lca_table_;
  Vertex root_ = kNoVertex;
  bool generic_ = true;
  double snap_tol_ = 1e-12;
};

/// A point of the metric merge tree: either on the edge from `carrier` to
/// its parent, or on the ray above the root when `carrier` is the root.
/// Points sitting exactly on a vertex always carry that vertex.
struct MetricPoint {
  Vertex carrier = kNoVertex;
  double height = 0.0;

  friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

/// Builds a normalized point; throws std::invalid_argument when the height
/// falls outside the carrier's interval.
MetricPoint make_point(const MergeTree& tree, Vertex carrier, double height);
inline MetricPoint vertex_point(const MergeTree& tree, Vertex v) {
  return MetricPoint{v, tree.height(v)};
}
bool is_valid_point(const MergeTree& tree, const MetricPoint& p);

/// p <= q in the order of the metric tree.
bool point_leq(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q);
bool same_point(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q);
MetricPoint point_lca(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q);
/// Shortest path distance 2 f(LCA) - f(p) - f(q).
double path_distance(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q);
/// The largest vertex below p.
inline Vertex floor_vertex(const MetricPoint& p) { return p.carrier; }

struct LenLvl {
  std::vector<std::size_t> len;
  std::vector<std::size_t> lvl;
  std::size_t tree_len = 0;
};
LenLvl len_lvl(const MergeTree& tree);

/// Separates tied heights: the j-th vertex of each group of equal heights
/// (ordered by id) moves up by j * scale / (|V| + 1).
MergeTree perturb_to_generic(const MergeTree& tree, double scale);

}  // namespace mti
