#include "mti/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace mti {

namespace {

std::string edge_name(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

}  // namespace

MergeTree MergeTree::from_records(std::vector<VertexRecord> records, Strictness strictness) {
  if (records.empty()) throw ValidationError("empty vertex set", {});
  std::sort(records.begin(), records.end(),
            [](const VertexRecord& a, const VertexRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].id == records[i - 1].id)
      throw ValidationError("duplicate vertex id " + records[i].id, {records[i].id});
  }
  MergeTree t;
  const std::size_t n = records.size();
  t.ids_.resize(n);
  t.heights_.resize(n);
  t.parents_.assign(n, kNoVertex);
  t.children_.assign(n, {});
  std::map<std::string, Vertex> index;
  for (std::size_t i = 0; i < n; ++i) {
    t.ids_[i] = records[i].id;
    t.heights_[i] = records[i].height;
    index[records[i].id] = i;
    if (!std::isfinite(records[i].height))
      throw ValidationError("non-finite height at " + records[i].id, {records[i].id});
  }
  std::vector<std::string> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (!records[i].parent) {
      roots.push_back(records[i].id);
      continue;
    }
    auto it = index.find(*records[i].parent);
    if (it == index.end())
      throw ValidationError("unknown parent " + *records[i].parent + " of " + records[i].id,
                            {records[i].id, *records[i].parent});
    if (it->second == i) throw ValidationError("cycle detected at " + records[i].id, {records[i].id});
    t.parents_[i] = it->second;
  }
  if (roots.empty()) {
    // Every vertex has a parent, so there is a cycle; report one.
    std::vector<std::string> cyc;
    std::vector<int> seen(n, 0);
    Vertex v = 0;
    while (!seen[v]) {
      seen[v] = 1;
      v = t.parents_[v];
    }
    Vertex s = v;
    do {
      cyc.push_back(t.ids_[v]);
      v = t.parents_[v];
    } while (v != s);
    throw ValidationError("cycle detected", cyc);
  }
  if (roots.size() > 1) throw ValidationError("multiple roots", roots);
  // Cycle detection: every vertex must reach the root.
  {
    std::vector<int> state(n, 0);  // 0 unknown, 1 in progress, 2 reaches root
    for (Vertex s = 0; s < n; ++s) {
      std::vector<Vertex> path;
      Vertex v = s;
      while (v != kNoVertex && state[v] == 0) {
        state[v] = 1;
        path.push_back(v);
        v = t.parents_[v];
      }
      if (v != kNoVertex && state[v] == 1) {
        std::vector<std::string> cyc;
        Vertex c = v;
        do {
          cyc.push_back(t.ids_[c]);
          c = t.parents_[c];
        } while (c != v);
        throw ValidationError("cycle detected", cyc);
      }
      for (Vertex p : path) state[p] = 2;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    Vertex p = t.parents_[v];
    if (p == kNoVertex) {
      t.root_ = v;
      continue;
    }
    if (!(t.heights_[v] < t.heights_[p]))
      throw ValidationError("non-increasing height on edge " + edge_name(t.ids_[v], t.ids_[p]),
                            {t.ids_[v], t.ids_[p]});
    t.children_[p].push_back(v);
  }
  t.finalize();
  if (strictness == Strictness::kStrict) {
    if (n > 1 && t.children_[t.root_].size() < 2)
      throw ValidationError("root " + t.ids_[t.root_] + " has a single child", {t.ids_[t.root_]});
    if (!t.generic_) {
      std::map<double, std::vector<std::string>> by_height;
      for (Vertex v = 0; v < n; ++v) by_height[t.heights_[v]].push_back(t.ids_[v]);
      for (auto& [h, ids] : by_height) {
        if (ids.size() > 1) {
          std::string msg = "duplicate heights {";
          for (std::size_t i = 0; i < ids.size(); ++i) msg += (i ? "," : "") + ids[i];
          throw ValidationError(msg + "}", ids);
        }
      }
    }
  }
  return t;
}

void MergeTree::finalize() {
  const std::size_t n = ids_.size();
  for (auto& ch : children_) std::sort(ch.begin(), ch.end());
  leaves_.clear();
  for (Vertex v = 0; v < n; ++v)
    if (children_[v].empty()) leaves_.push_back(v);
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  depth_.assign(n, 0);
  postorder_.clear();
  std::size_t clock = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack{{root_, 0}};
  tin_[root_] = clock++;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < children_[v].size()) {
      Vertex c = children_[v][next++];
      depth_[c] = depth_[v] + 1;
      tin_[c] = clock++;
      stack.push_back({c, 0});
    } else {
      tout_[v] = clock++;
      postorder_.push_back(v);
      stack.pop_back();
    }
  }
  sub_min_.assign(n, 0.0);
  sub_argmin_.assign(n, kNoVertex);
  for (Vertex v : postorder_) {
    sub_min_[v] = heights_[v];
    sub_argmin_[v] = v;
    for (Vertex c : children_[v]) {
      if (sub_min_[c] < sub_min_[v] || (sub_min_[c] == sub_min_[v] && sub_argmin_[c] < sub_argmin_[v])) {
        sub_min_[v] = sub_min_[c];
        sub_argmin_[v] = sub_argmin_[c];
      }
    }
  }
  lca_table_.clear();
  if (n <= 1024) {
    lca_table_.resize(n * n);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v) lca_table_[u * n + v] = lca_walk(u, v);
  }
  std::vector<double> hs = heights_;
  std::sort(hs.begin(), hs.end());
  generic_ = std::adjacent_find(hs.begin(), hs.end()) == hs.end();
  double scale = 1.0;
  for (double h : hs) scale = std::max(scale, std::fabs(h));
  snap_tol_ = 1e-12 * scale;
  for (std::size_t i = 1; i < hs.size(); ++i) {
    double gap = hs[i] - hs[i - 1];
    if (gap > 0) snap_tol_ = std::min(snap_tol_, gap / 4);
  }
}

bool MergeTree::degenerate() const { return size() == 1 || children_[root_].size() == 1; }

std::optional<Vertex> MergeTree::find(const std::string& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Vertex>(it - ids_.begin());
}

Vertex MergeTree::at(const std::string& id) const {
  auto v = find(id);
  if (!v) throw ValidationError("unknown vertex id " + id, {id});
  return *v;
}

Vertex MergeTree::lca_walk(Vertex u, Vertex v) const {
  while (!leq(u, v)) v = parents_[v];
  return v;
}

Vertex MergeTree::lca(std::span<const Vertex> vs) const {
  if (vs.empty()) throw std::invalid_argument("lca of an empty set");
  Vertex r = vs[0];
  for (Vertex v : vs.subspan(1)) r = lca(r, v);
  return r;
}

std::vector<Vertex> MergeTree::subtree_vertices(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex u = 0; u < size(); ++u)
    if (leq(u, v)) out.push_back(u);
  return out;
}

MergeTree MergeTree::subtree(Vertex v, std::vector<Vertex>* to_parent) const {
  std::vector<VertexRecord> recs;
  std::vector<Vertex> members = subtree_vertices(v);
  for (Vertex u : members) {
    VertexRecord r{ids_[u], heights_[u], std::nullopt};
    if (u != v) r.parent = ids_[parents_[u]];
    recs.push_back(std::move(r));
  }
  MergeTree t = from_records(std::move(recs));
  // Ids are sorted identically, so indices map in order.
  if (to_parent) *to_parent = members;
  return t;
}

std::vector<VertexRecord> MergeTree::records() const {
  std::vector<VertexRecord> out;
  for (Vertex v = 0; v < size(); ++v) {
    VertexRecord r{ids_[v], heights_[v], std::nullopt};
    if (parents_[v] != kNoVertex) r.parent = ids_[parents_[v]];
    out.push_back(std::move(r));
  }
  return out;
}

MergeTree MergeTree::with_heights(const std::vector<double>& heights) const {
  auto recs = records();
  for (Vertex v = 0; v < size(); ++v) recs[v].height = heights.at(v);
  return from_records(std::move(recs));
}

MetricPoint make_point(const MergeTree& tree, Vertex carrier, double height) {
  if (carrier >= tree.size()) throw std::invalid_argument("invalid carrier");
  const double tol = tree.snap_tolerance();
  const double lo = tree.height(carrier);
  if (height < lo - tol) throw std::invalid_argument("height below carrier " + tree.id(carrier));
  if (height <= lo + tol) return {carrier, lo};
  Vertex p = tree.parent(carrier);
  if (p == kNoVertex) return {carrier, height};
  const double hi = tree.height(p);
  if (height > hi + tol) throw std::invalid_argument("height above edge of " + tree.id(carrier));
  if (height >= hi - tol) return {p, hi};
  return {carrier, height};
}

bool is_valid_point(const MergeTree& tree, const MetricPoint& p) {
  if (p.carrier >= tree.size() || !std::isfinite(p.height)) return false;
  if (p.height < tree.height(p.carrier)) return false;
  Vertex par = tree.parent(p.carrier);
  return par == kNoVertex || p.height < tree.height(par);
}

bool point_leq(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q) {
  if (!tree.leq(p.carrier, q.carrier)) return false;
  if (p.carrier != q.carrier) return true;
  return p.height <= q.height + tree.snap_tolerance();
}

bool same_point(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q) {
  return p.carrier == q.carrier && std::fabs(p.height - q.height) <= tree.snap_tolerance();
}

MetricPoint point_lca(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q) {
  if (point_leq(tree, p, q)) return q;
  if (point_leq(tree, q, p)) return p;
  return vertex_point(tree, tree.lca(p.carrier, q.carrier));
}

double path_distance(const MergeTree& tree, const MetricPoint& p, const MetricPoint& q) {
  if (!is_valid_point(tree, p) || !is_valid_point(tree, q))
    throw std::invalid_argument("invalid metric point");
  if (same_point(tree, p, q)) return 0.0;
  MetricPoint l = point_lca(tree, p, q);
  return std::max(0.0, 2 * l.height - p.height - q.height);
}

LenLvl len_lvl(const MergeTree& tree) {
  LenLvl out;
  out.len.resize(tree.size());
  out.lvl.resize(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) {
    out.len[v] = tree.depth(v) + 1;
    out.tree_len = std::max(out.tree_len, out.len[v]);
  }
  for (Vertex v = 0; v < tree.size(); ++v) out.lvl[v] = out.tree_len - out.len[v];
  return out;
}

MergeTree perturb_to_generic(const MergeTree& tree, double scale) {
  if (!(scale > 0)) throw std::invalid_argument("perturbation scale must be positive");
  std::map<double, std::vector<Vertex>> groups;
  for (Vertex v = 0; v < tree.size(); ++v) groups[tree.height(v)].push_back(v);
  std::vector<double> h(tree.size());
  const double step = scale / static_cast<double>(tree.size() + 1);
  for (auto& [height, members] : groups)
    for (std::size_t j = 0; j < members.size(); ++j)
      h[members[j]] = height + static_cast<double>(j) * step;
  for (Vertex v = 0; v < tree.size(); ++v) {
    Vertex p = tree.parent(v);
    if (p != kNoVertex && !(h[v] < h[p]))
      throw ValidationError("perturbation breaks monotonicity on edge " +
                                edge_name(tree.id(v), tree.id(p)),
                            {tree.id(v), tree.id(p)});
  }
  MergeTree out = tree.with_heights(h);
  if (!out.generic()) throw ValidationError("perturbation failed to separate heights", {});
  return out;
}

}  // namespace mti
