#include "mti/induced_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mti {

MetricPoint structural_shift(const MergeTree& tree, const MetricPoint& p, double k) {
  if (k < 0) throw std::invalid_argument("structural shift with negative k");
  const double h = p.height + k;
  const double tol = tree.snap_tolerance();
  Vertex c = p.carrier;
  while (tree.parent(c) != kNoVertex && tree.height(tree.parent(c)) < h - tol) c = tree.parent(c);
  return make_point(tree, c, std::max(h, tree.height(c)));
}

InducedMap InducedMap::raw(const Coupling& c) {
  InducedMap m;
  const MergeTree& t = c.t();
  const MergeTree& g = c.g();
  CouplingContext ctx = coupling_context(c);
  m.src_ = &t;
  m.dst_ = &g;
  m.norm_ = ctx.norm;
  m.max_vertex_ = c.max_pair().first;
  const std::size_t n = t.size();
  m.anchor_.assign(n, false);
  m.image_.assign(n, MetricPoint{});
  m.low_.assign(n, kNoVertex);
  m.up_.assign(n, kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    switch (ctx.t.cls[v]) {
      case VertexClass::kCoupled:
        m.anchor_[v] = true;
        m.image_[v] = vertex_point(g, c.partner_of_t(v));
        break;
      case VertexClass::kDeleted:
        m.anchor_[v] = true;
        if (ctx.t.lambda[v].empty()) {
          // Two-step deletion: halfway up to phi, but never below eta.
          Vertex eta = ctx.t.eta[v];
          double h = std::max(g.height(eta), 0.5 * (t.height(v) + t.height(ctx.t.phi[v])));
          m.image_[v] = structural_shift(g, vertex_point(g, eta), h - g.height(eta));
        } else {
          m.image_[v] = vertex_point(g, ctx.t.chi[v]);
        }
        break;
      case VertexClass::kUnused:
        break;
    }
  }
  const Vertex top = m.max_vertex_;
  for (Vertex v = 0; v < n; ++v) {
    if (t.leq(top, v)) continue;
    m.low_[v] = m.anchor_[v] ? v : ctx.t.lambda[v].front();
    Vertex u = t.parent(v);
    while (!m.anchor_[u] && !t.leq(top, u)) u = t.parent(u);
    m.up_[v] = u;
  }
  return m;
}

InducedMap InducedMap::shifted(const Coupling& c, double eps) {
  InducedMap m = raw(c);
  if (eps < m.norm_ - kTau) throw std::invalid_argument("eps below the coupling cost");
  m.eps_ = eps;
  return m;
}

MetricPoint InducedMap::eval_raw(const MetricPoint& p) const {
  const MergeTree& t = *src_;
  const MergeTree& g = *dst_;
  if (!is_valid_point(t, p)) throw std::invalid_argument("invalid point");
  const Vertex top = max_vertex_;
  const Vertex c = p.carrier;
  if (t.leq(top, c)) return structural_shift(g, image_[top], p.height - t.height(top));
  const Vertex l = low_[c], u = up_[c];
  const MetricPoint& al = image_[l];
  if (p.height == t.height(l)) return al;
  MetricPoint au = anchor_[u] ? image_[u] : structural_shift(g, image_[top], t.height(u) - t.height(top));
  // A deleted vertex hanging off an unused ancestor of the top pair may map
  // above the image of that ancestor; the two images still lie on one path.
  const bool rising = point_leq(g, al, au);
  if (!rising && !point_leq(g, au, al))
    throw std::logic_error("induced map: images of " + t.id(l) + ", " + t.id(u) + " not comparable");
  double lam = (p.height - t.height(l)) / (t.height(u) - t.height(l));
  double h = al.height + lam * (au.height - al.height);
  const MetricPoint& base = rising ? al : au;
  return structural_shift(g, base, std::max(0.0, h - base.height));
}

MetricPoint InducedMap::eval(const MetricPoint& p) const {
  if (!eps_) return eval_raw(p);
  const MergeTree& t = *src_;
  if (!is_valid_point(t, p)) throw std::invalid_argument("invalid point");
  // Shifted anchors are ordered along every edge sequence, so a point climbs
  // from the shifted image of its lower anchor.
  return climb(p.carrier, p.height);
}

MetricPoint InducedMap::climb(Vertex c, double h) const {
  const MergeTree& t = *src_;
  const Vertex l = t.leq(max_vertex_, c) ? max_vertex_ : low_[c];
  const MetricPoint& a = image_[l];
  double k = t.height(l) + *eps_ - a.height;
  if (k < -1e-7) throw std::logic_error("shift below raw image at " + t.id(l));
  MetricPoint base = structural_shift(*dst_, a, std::max(0.0, k));
  return structural_shift(*dst_, base, h - t.height(l));
}

MetricPoint InducedMap::edge_limit(Vertex c) const {
  if (!eps_) throw std::logic_error("edge limits need a shifted map");
  Vertex p = src_->parent(c);
  if (p == kNoVertex) throw std::invalid_argument("root has no edge");
  return climb(c, src_->height(p));
}

std::vector<MetricPoint> sample_points(const MergeTree& tree, int per_edge) {
  std::vector<MetricPoint> out;
  for (Vertex v = 0; v < tree.size(); ++v) out.push_back(vertex_point(tree, v));
  for (Vertex v = 0; v < tree.size(); ++v) {
    Vertex p = tree.parent(v);
    if (p == kNoVertex) continue;
    for (int i = 1; i <= per_edge; ++i) {
      double h = tree.height(v) + (tree.height(p) - tree.height(v)) * i / (per_edge + 1);
      out.push_back(make_point(tree, v, h));
    }
  }
  const double step = std::max(1.0, tree.height_span());
  for (double k : {0.5, 1.0, 2.0}) out.push_back({tree.root(), tree.max_height() + k * step});
  return out;
}

namespace {

std::string point_name(const MergeTree& t, const MetricPoint& p) {
  return t.id(p.carrier) + "@" + std::to_string(p.height);
}

void check_side(const InducedMap& a, const InducedMap& b, double eps, int per_edge, GoodMapReport& r) {
  const MergeTree& t = a.source();
  const MergeTree& g = a.target();
  auto pts = sample_points(t, per_edge);
  std::vector<MetricPoint> img;
  for (const auto& p : pts) img.push_back(a.eval(p));
  r.samples += pts.size();
  // (P1)
  for (std::size_t i = 0; i < pts.size(); ++i)
    r.p1_residual = std::max(r.p1_residual, std::fabs(img[i].height - pts[i].height - eps));
  for (Vertex v = 0; v < t.size(); ++v)
    if (t.parent(v) != kNoVertex && !same_point(g, a.edge_limit(v), a.eval_vertex(t.parent(v))))
      ++r.continuity_violations;
  // (P2): strictly ordered images force the 2eps-shifts to be ordered.
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j || !point_leq(g, img[i], img[j]) || same_point(g, img[i], img[j])) continue;
      MetricPoint l = point_lca(t, pts[i], pts[j]);
      if (l.height > pts[j].height + 2 * eps + kTau)
        r.p2_violations.push_back({point_name(t, pts[i]), point_name(t, pts[j])});
    }
  // (P3): the image is the union of the up-sets of leaf images.
  std::vector<MetricPoint> leaf_img;
  for (Vertex l : t.leaves()) leaf_img.push_back(a.eval_vertex(l));
  for (Vertex y = 0; y < g.size(); ++y) {
    MetricPoint py = vertex_point(g, y);
    bool covered = false;
    double w = INFINITY;
    for (const auto& q : leaf_img) {
      if (point_leq(g, q, py)) covered = true;
      w = std::min(w, point_lca(g, q, py).height);
    }
    if (covered) continue;
    double excess = w - g.height(y) - 2 * eps;
    if (excess > r.p3_max_excess) r.p3_max_excess = excess;
    if (excess > kTau) r.p3_witnesses.push_back(g.id(y));
  }
  // (I2): beta(alpha(p)) = s^{2eps}(p).
  for (std::size_t i = 0; i < pts.size(); ++i) {
    MetricPoint q = b.eval(img[i]);
    r.i2_residual = std::max(r.i2_residual, std::fabs(q.height - pts[i].height - 2 * eps));
    if (!point_leq(t, pts[i], q)) ++r.i2_violations;
  }
}

}  // namespace

GoodMapReport check_eps_good(const Coupling& c, double eps, int per_edge) {
  InducedMap alpha = InducedMap::shifted(c, eps);
  Coupling ct = c.transposed();
  InducedMap beta = InducedMap::shifted(ct, eps);
  GoodMapReport r;
  r.eps = eps;
  check_side(alpha, beta, eps, per_edge, r);
  check_side(beta, alpha, eps, per_edge, r);
  return r;
}

Coupling extract_coupling(const MergeTree& t, const MergeTree& g, const std::vector<MetricPoint>& images,
                          double eps) {
  if (images.size() != t.size()) throw ValidationError("image count does not match the tree", {});
  for (Vertex v = 0; v < t.size(); ++v) {
    if (!is_valid_point(g, images[v])) throw ValidationError("invalid image of " + t.id(v), {t.id(v)});
    if (std::fabs(images[v].height - t.height(v) - eps) > kTau)
      throw ValidationError("image height of " + t.id(v) + " breaks the height law", {t.id(v)});
    Vertex p = t.parent(v);
    if (p != kNoVertex && !point_leq(g, images[v], images[p]))
      throw ValidationError("images of " + t.id(v) + " and " + t.id(p) + " not ordered", {t.id(v), t.id(p)});
  }
  // Leaves with minimal images are coupled to the vertex below their image.
  std::vector<Vertex> chosen;
  for (Vertex v : t.leaves()) {
    bool minimal = true;
    for (Vertex w : t.leaves()) {
      if (w == v || !point_leq(g, images[w], images[v])) continue;
      if (!same_point(g, images[w], images[v]) || w < v) minimal = false;
    }
    if (minimal) chosen.push_back(v);
  }
  PairSet pairs;
  std::vector<Vertex> phi(t.size(), kNoVertex);
  for (Vertex v : chosen) {
    phi[v] = floor_vertex(images[v]);
    pairs.push_back({v, phi[v]});
  }
  // T1/G1 keep vertices above a coupled vertex; T2/G2 drop single-child ones.
  std::vector<std::vector<Vertex>> below(t.size());
  for (Vertex x : t.postorder()) {
    if (phi[x] != kNoVertex) below[x].push_back(x);
    for (Vertex ch : t.children(x)) below[x].insert(below[x].end(), below[ch].begin(), below[ch].end());
  }
  std::vector<Vertex> g_leaves;
  for (Vertex v : chosen) g_leaves.push_back(phi[v]);
  for (Vertex x = 0; x < t.size(); ++x) {
    if (phi[x] != kNoVertex) continue;
    std::size_t kept_children = 0;
    for (Vertex ch : t.children(x))
      if (!below[ch].empty()) ++kept_children;
    if (kept_children < 2) continue;
    std::vector<Vertex> imgs;
    for (Vertex v : below[x]) imgs.push_back(phi[v]);
    Vertex w = g.lca(imgs);
    std::size_t under = 0;
    for (Vertex y : g_leaves)
      if (g.leq(y, w)) ++under;
    if (under == imgs.size()) pairs.push_back({x, w});
  }
  return validate_coupling(t, g, std::move(pairs));
}

}  // namespace mti
