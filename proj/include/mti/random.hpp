#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mti/merge_tree.hpp"
#include "mti/point_cloud.hpp"

namespace mti {

/// Portable random source: mt19937_64 with hand-rolled uniform and normal
/// draws, so streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  /// Box-Muller; the spare value is discarded to keep draws stateless.
  double normal(double mean, double sd);

 private:
  std::mt19937_64 eng_;
};

/// SplitMix64 mix of (seed, n, rep) for independent substreams.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t rep);

struct CloudPair {
  PointCloud first, second;
  std::vector<std::array<double, 2>> points_first, points_second;
  std::array<double, 2> sigma_first{}, sigma_second{};  // per coordinate
};

/// Two planar clouds of n points; each coordinate of each cloud is N(5, sigma)
/// with its own sigma ~ N(3, 1), redrawn until it exceeds 0.05.
CloudPair generate_point_cloud_pair(std::size_t n, Rng& rng);

/// Single-linkage tree of a cloud, perturbed to distinct heights with scale
/// 1e-9 times its height span.
MergeTree cloud_tree(const PointCloud& cloud);

/// Random generic tree with `leaves` leaves, well separated heights and
/// occasional three-way merges.
MergeTree random_merge_tree(Rng& rng, std::size_t leaves);

}  // namespace mti
