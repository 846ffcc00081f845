#include "mti/random.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace mti {

double Rng::normal(double mean, double sd) {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t rep) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ n) ^ rep);
}

CloudPair generate_point_cloud_pair(std::size_t n, Rng& rng) {
  auto sigma = [&] {
    double s = rng.normal(3.0, 1.0);
    while (s <= 0.05) s = rng.normal(3.0, 1.0);
    return s;
  };
  auto cloud = [&](const std::array<double, 2>& s) {
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) {
      p[0] = rng.normal(5.0, s[0]);
      p[1] = rng.normal(5.0, s[1]);
    }
    return pts;
  };
  CloudPair out;
  out.sigma_first = {sigma(), sigma()};
  out.sigma_second = {sigma(), sigma()};
  out.points_first = cloud(out.sigma_first);
  out.points_second = cloud(out.sigma_second);
  out.first = PointCloud::from_points(out.points_first);
  out.second = PointCloud::from_points(out.points_second);
  return out;
}

MergeTree cloud_tree(const PointCloud& cloud) {
  MergeTree t = single_linkage_tree(cloud).tree;
  return perturb_to_generic(t, 1e-9 * std::max(t.height_span(), 1e-300));
}

MergeTree random_merge_tree(Rng& rng, std::size_t leaves) {
  if (leaves == 0) throw std::invalid_argument("random tree needs a leaf");
  std::vector<VertexRecord> recs;
  struct Cluster {
    std::size_t rec;
    double height;
  };
  std::vector<Cluster> open;
  const std::size_t w = std::to_string(leaves).size();
  auto name = [&](char c, std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(1, c) + std::string(w + 1 - s.size(), '0') + s;
  };
  for (std::size_t i = 0; i < leaves; ++i) {
    recs.push_back({name('l', i), rng.uniform(0.0, 1.0), std::nullopt});
    open.push_back({i, recs.back().height});
  }
  std::size_t k = 0;
  while (open.size() > 1) {
    std::size_t arity = (open.size() >= 3 && rng.uniform() < 0.15) ? 3 : 2;
    std::vector<Cluster> kids;
    for (std::size_t j = 0; j < arity; ++j) {
      std::size_t i = rng.index(open.size());
      kids.push_back(open[i]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
    }
    double top = 0.0;
    for (const auto& c : kids) top = std::max(top, c.height);
    recs.push_back({name('n', k++), top + rng.uniform(0.1, 1.0), std::nullopt});
    for (const auto& c : kids) recs[c.rec].parent = recs.back().id;
    open.push_back({recs.size() - 1, recs.back().height});
  }
  return MergeTree::from_records(std::move(recs), Strictness::kStrict);
}

}  // namespace mti
