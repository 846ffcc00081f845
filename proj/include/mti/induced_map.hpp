#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mti/coupling.hpp"

namespace mti {

/// The unique point >= p at height f(p) + k; enters the root ray when needed.
MetricPoint structural_shift(const MergeTree& tree, const MetricPoint& p, double k);

/// The continuous map induced by a coupling, optionally shifted up so that
/// every point p lands at height f(p) + eps.
class InducedMap {
 public:
  /// Raw induced map (no shift).
  static InducedMap raw(const Coupling& c);
  /// Shifted map; throws std::invalid_argument when eps < cost of c.
  static InducedMap shifted(const Coupling& c, double eps);

  const MergeTree& source() const { return *src_; }
  const MergeTree& target() const { return *dst_; }
  std::optional<double> eps() const { return eps_; }
  double coupling_cost() const { return norm_; }
  /// Whether v is coupled or deleted (its image is fixed by a rule).
  bool is_anchor(Vertex v) const { return anchor_[v]; }
  /// Unshifted rule image of an anchor.
  const MetricPoint& anchor_image(Vertex v) const { return image_[v]; }

  MetricPoint eval(const MetricPoint& p) const;
  MetricPoint eval_vertex(Vertex v) const { return eval(vertex_point(*src_, v)); }
  /// Raw image, ignoring the shift.
  MetricPoint eval_raw(const MetricPoint& p) const;
  /// Shifted image of the upper end of the edge above c, approached along
  /// that edge; equals eval_vertex(parent) when the map is continuous.
  MetricPoint edge_limit(Vertex c) const;

 private:
  MetricPoint climb(Vertex c, double h) const;

  const MergeTree* src_ = nullptr;
  const MergeTree* dst_ = nullptr;
  std::optional<double> eps_;
  double norm_ = 0.0;
  Vertex max_vertex_ = kNoVertex;
  std::vector<bool> anchor_;
  std::vector<MetricPoint> image_;
  std::vector<Vertex> low_, up_;
};

/// Vertices, `per_edge` interior points per edge and a few root-ray points.
std::vector<MetricPoint> sample_points(const MergeTree& tree, int per_edge);

struct GoodMapReport {
  double eps = 0.0;
  double p1_residual = 0.0;
  std::vector<std::pair<std::string, std::string>> p2_violations;
  double p3_max_excess = 0.0;  // max of g(w) - g(y) - 2 eps over uncovered y
  std::vector<std::string> p3_witnesses;
  std::size_t continuity_violations = 0;
  double i2_residual = 0.0;
  std::size_t i2_violations = 0;
  std::size_t samples = 0;

  bool pass(double tol = kTau) const {
    return p1_residual <= tol && continuity_violations == 0 && p2_violations.empty() && p3_max_excess <= tol && i2_residual <= tol &&
           i2_violations == 0;
  }
};

/// Checks (P1)-(P3) for both shifted maps of c and the composition law.
/// Throws std::invalid_argument when eps is below the cost of c.
GoodMapReport check_eps_good(const Coupling& c, double eps, int per_edge = 3);

/// Builds a coupling from the vertex images of an eps-good map T -> G.
/// Throws ValidationError when the images break (P1) or monotonicity.
Coupling extract_coupling(const MergeTree& t, const MergeTree& g, const std::vector<MetricPoint>& images,
                          double eps);

}  // namespace mti
