#include "mti/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mti {

namespace {

std::string padded(char prefix, std::size_t i, std::size_t width) {
  std::string s = std::to_string(i);
  return std::string(1, prefix) + std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    out.push_back(v);
  }
  return out;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};

}  // namespace

PointCloud PointCloud::from_points(const std::vector<std::array<double, 2>>& points) {
  for (const auto& p : points)
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw std::invalid_argument("non-finite coordinate");
  PointCloud c;
  const std::size_t n = points.size();
  c.dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      c.dist[i][j] = c.dist[j][i] = std::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]);
  return c;
}

PointCloud PointCloud::from_matrix(std::vector<std::vector<double>> matrix) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw std::invalid_argument("distance matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      double d = matrix[i][j];
      if (!std::isfinite(d) || d < 0) throw std::invalid_argument("invalid distance entry");
      if (i == j && d != 0) throw std::invalid_argument("nonzero diagonal");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (matrix[i][j] != matrix[j][i]) throw std::invalid_argument("distance matrix is not symmetric");
  PointCloud c;
  c.dist = std::move(matrix);
  return c;
}

PointCloud PointCloud::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("empty point cloud file");
  if (lines[0] == "matrix") {
    std::vector<std::vector<double>> m;
    for (std::size_t i = 1; i < lines.size(); ++i) m.push_back(split_numbers(lines[i]));
    return from_matrix(std::move(m));
  }
  std::vector<std::array<double, 2>> pts;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 && (lines[0] == "x,y")) continue;
    auto v = split_numbers(lines[i]);
    if (v.size() != 2) throw std::invalid_argument("expected two columns in " + path);
    pts.push_back({v[0], v[1]});
  }
  return from_points(pts);
}

LinkageResult single_linkage_tree(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n < 2) throw std::invalid_argument("single linkage needs at least 2 points");
  struct Edge {
    double d;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!std::isfinite(cloud.dist[i][j])) throw std::invalid_argument("non-finite distance");
      edges.push_back({cloud.dist[i][j], i, j});
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
  });

  const std::size_t width = std::to_string(n - 1).size();
  LinkageResult out;
  DisjointSets ds(n);
  // Zero-distance points collapse into a single leaf.
  for (const Edge& e : edges) {
    if (e.d > 0) break;
    std::size_t a = ds.find(e.i), b = ds.find(e.j);
    if (a != b) {
      ds.parent[std::max(a, b)] = std::min(a, b);
      out.degenerate = true;
    }
  }
  struct Node {
    std::string id;
    double height;
    std::vector<std::size_t> children;
    bool alive = true;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> cluster_node(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.find(i) != i) continue;
    cluster_node[i] = nodes.size();
    nodes.push_back({padded('p', i, width), 0.0, {}});
  }
  std::size_t internal = 0;
  for (const Edge& e : edges) {
    if (e.d <= 0) continue;
    std::size_t a = ds.find(e.i), b = ds.find(e.j);
    if (a == b) continue;
    std::size_t na = cluster_node[a], nb = cluster_node[b];
    const bool a_open = !nodes[na].children.empty() && nodes[na].height == e.d;
    const bool b_open = !nodes[nb].children.empty() && nodes[nb].height == e.d;
    std::size_t merged;
    if (a_open && b_open) {
      for (std::size_t c : nodes[nb].children) nodes[na].children.push_back(c);
      nodes[nb].alive = false;
      merged = na;
    } else if (a_open) {
      nodes[na].children.push_back(nb);
      merged = na;
    } else if (b_open) {
      nodes[nb].children.push_back(na);
      merged = nb;
    } else {
      merged = nodes.size();
      nodes.push_back({"", e.d, {na, nb}});
    }
    std::size_t root = std::min(a, b);
    ds.parent[std::max(a, b)] = root;
    cluster_node[root] = merged;
  }
  // Internal ids in creation order of surviving nodes.
  std::vector<std::size_t> internals;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].alive && !nodes[k].children.empty()) internals.push_back(k);
  const std::size_t iwidth = std::to_string(internals.empty() ? 0 : internals.size() - 1).size();
  for (std::size_t k : internals) nodes[k].id = padded('m', internal++, iwidth);

  std::vector<VertexRecord> recs;
  std::vector<std::string> parent_of(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].alive)
      for (std::size_t c : nodes[k].children) parent_of[c] = nodes[k].id;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!nodes[k].alive) continue;
    VertexRecord r{nodes[k].id, nodes[k].height, std::nullopt};
    if (!parent_of[k].empty()) r.parent = parent_of[k];
    recs.push_back(std::move(r));
  }
  out.tree = MergeTree::from_records(std::move(recs));
  return out;
}

}  // namespace mti
