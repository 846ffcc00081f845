#include "mti/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace mti {

namespace {

std::string pair_name(const MergeTree& t, const MergeTree& g, const Pair& p) {
  return "(" + t.id(p.first) + "," + g.id(p.second) + ")";
}

// Maximal elements of a vertex set under the tree order.
std::vector<Vertex> maximal(const MergeTree& x, const std::vector<Vertex>& vs) {
  std::vector<Vertex> out;
  for (Vertex v : vs) {
    bool dominated = false;
    for (Vertex w : vs)
      if (x.less(v, w)) dominated = true;
    if (!dominated) out.push_back(v);
  }
  return out;
}

// Core per-side quantities shared by the full context and the fast evaluator.
struct SideCore {
  std::vector<std::size_t>& count;
  std::vector<Vertex>& lam_lca;
  std::vector<Vertex>& low_partner;
  std::vector<Vertex>& phi;
};

void compute_core(const MergeTree& x, const MergeTree& y, const std::vector<Vertex>& px, SideCore& core) {
  const std::size_t n = x.size();
  core.count.assign(n, 0);
  core.lam_lca.assign(n, kNoVertex);
  core.low_partner.assign(n, kNoVertex);
  core.phi.assign(n, kNoVertex);
  auto lower = [&](Vertex a, Vertex b) {
    if (a == kNoVertex) return b;
    if (b == kNoVertex) return a;
    if (y.height(b) < y.height(a) || (y.height(b) == y.height(a) && b < a)) return b;
    return a;
  };
  auto join = [&](Vertex a, Vertex b) { return a == kNoVertex ? b : y.lca(a, b); };
  for (Vertex v : x.postorder()) {
    std::size_t cnt = 0;
    Vertex lam = kNoVertex, low = kNoVertex;
    for (Vertex c : x.children(v)) {
      if (px[c] != kNoVertex) {
        ++cnt;
        lam = join(lam, px[c]);
        low = lower(low, px[c]);
      } else if (core.count[c] > 0) {
        cnt += core.count[c];
        lam = join(lam, core.lam_lca[c]);
      }
      low = lower(low, core.low_partner[c]);
    }
    core.count[v] = cnt;
    core.lam_lca[v] = lam;
    core.low_partner[v] = low;
  }
  const auto& post = x.postorder();
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    Vertex v = *it;
    Vertex p = x.parent(v);
    if (p == kNoVertex) continue;
    // The first ancestor whose closed subtree holds a coupled vertex.
    core.phi[v] = core.count[p] > 0 || px[p] != kNoVertex ? p : core.phi[p];
  }
}

double deletion_zero_cost(const MergeTree& x, const MergeTree& y, const std::vector<Vertex>& px,
                          const SideCore& core, Vertex v, Vertex* phi_out, Vertex* eta_out, CostCase* cc) {
  const Vertex phi = core.phi[v];
  const Vertex eta = core.low_partner[phi] != kNoVertex ? core.low_partner[phi] : px[phi];
  double half = 0.5 * (x.height(phi) - x.height(v));
  double up = y.height(eta) - x.height(v);
  if (phi_out) *phi_out = phi;
  if (eta_out) *eta_out = eta;
  if (cc) *cc = half >= up ? CostCase::kDeleteHalving : CostCase::kDeleteEta;
  return std::max(half, up);
}

void fill_side(const MergeTree& x, const MergeTree& y, const std::vector<Vertex>& px, SideContext& s) {
  const std::size_t n = x.size();
  std::vector<std::size_t> count;
  std::vector<Vertex> lam_lca, low, phi;
  SideCore core{count, lam_lca, low, phi};
  compute_core(x, y, px, core);
  s.cls.assign(n, VertexClass::kDeleted);
  s.lambda.assign(n, {});
  s.phi.assign(n, kNoVertex);
  s.delta.assign(n, kNoVertex);
  s.chi = lam_lca;
  s.gamma = low;
  s.eta.assign(n, kNoVertex);
  s.cost.assign(n, 0.0);
  s.cost_case.assign(n, CostCase::kUnused);
  for (Vertex v : x.postorder()) {
    for (Vertex c : x.children(v)) {
      if (px[c] != kNoVertex)
        s.lambda[v].push_back(c);
      else
        s.lambda[v].insert(s.lambda[v].end(), s.lambda[c].begin(), s.lambda[c].end());
    }
    std::sort(s.lambda[v].begin(), s.lambda[v].end());
  }
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u = v; u != kNoVertex; u = x.parent(u))
      if (px[u] != kNoVertex) {
        s.delta[v] = u;
        break;
      }
    if (phi[v] != kNoVertex) {
      s.phi[v] = phi[v];
      s.eta[v] = low[phi[v]] != kNoVertex ? low[phi[v]] : px[phi[v]];
    }
    if (px[v] != kNoVertex) {
      s.cls[v] = VertexClass::kCoupled;
      s.cost[v] = std::fabs(x.height(v) - y.height(px[v]));
      s.cost_case[v] = CostCase::kCouple;
    } else if (count[v] == 1) {
      s.cls[v] = VertexClass::kUnused;
    } else if (count[v] == 0) {
      CostCase cc;
      s.cost[v] = deletion_zero_cost(x, y, px, core, v, nullptr, nullptr, &cc);
      s.cost_case[v] = cc;
    } else {
      s.cost[v] = std::fabs(x.height(v) - y.height(lam_lca[v]));
      s.cost_case[v] = CostCase::kDeleteMulti;
    }
  }
}

}  // namespace

CouplingError::CouplingError(const std::string& what, std::vector<CouplingViolation> violations)
    : ValidationError(what, {}), violations_(std::move(violations)) {}

std::vector<CouplingViolation> check_coupling(const MergeTree& t, const MergeTree& g, const PairSet& pairs) {
  std::vector<CouplingViolation> out;
  for (const auto& [a, b] : pairs)
    if (a >= t.size() || b >= g.size()) {
      out.push_back({"ids", "pair references a vertex outside the trees", {}});
      return out;
    }
  // (C2)
  std::vector<std::vector<Pair>> by_t(t.size()), by_g(g.size());
  for (const auto& p : pairs) {
    by_t[p.first].push_back(p);
    by_g[p.second].push_back(p);
  }
  for (Vertex v = 0; v < t.size(); ++v)
    if (by_t[v].size() > 1) {
      std::vector<std::string> w;
      for (const auto& p : by_t[v]) w.push_back(pair_name(t, g, p));
      out.push_back({"C2", "vertex " + t.id(v) + " coupled more than once", w});
    }
  for (Vertex v = 0; v < g.size(); ++v)
    if (by_g[v].size() > 1) {
      std::vector<std::string> w;
      for (const auto& p : by_g[v]) w.push_back(pair_name(t, g, p));
      out.push_back({"C2", "vertex " + g.id(v) + " coupled more than once", w});
    }
  // (C3)
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (i == j) continue;
      const auto& [a, b] = pairs[i];
      const auto& [c, d] = pairs[j];
      if (t.less(a, c) != g.less(b, d))
        out.push_back({"C3", "order flip between " + pair_name(t, g, pairs[i]) + " and " + pair_name(t, g, pairs[j]),
                       {t.id(a), g.id(b), t.id(c), g.id(d)}});
    }
  // (C1)
  {
    std::vector<Vertex> pt, pg;
    for (const auto& [a, b] : pairs) {
      pt.push_back(a);
      pg.push_back(b);
    }
    std::sort(pt.begin(), pt.end());
    pt.erase(std::unique(pt.begin(), pt.end()), pt.end());
    std::sort(pg.begin(), pg.end());
    pg.erase(std::unique(pg.begin(), pg.end()), pg.end());
    auto mt = maximal(t, pt), mg = maximal(g, pg);
    if (pairs.empty()) {
      out.push_back({"C1", "empty pair set has no maximal pair", {}});
    } else if (mt.size() != 1 || mg.size() != 1) {
      std::vector<std::string> w;
      for (const auto& p : pairs) {
        bool dominated = false;
        for (const auto& q : pairs)
          if (t.less(p.first, q.first) && g.less(p.second, q.second)) dominated = true;
        if (!dominated) w.push_back(pair_name(t, g, p));
      }
      out.push_back({"C1", "more than one maximal pair", w});
    }
  }
  // (C4)
  auto c4 = [&](const MergeTree& x, const std::vector<Vertex>& coupled, const char* side) {
    for (Vertex a : coupled) {
      std::vector<Vertex> below;
      for (Vertex v : coupled)
        if (x.less(v, a)) below.push_back(v);
      auto lam = maximal(x, below);
      if (lam.size() == 1)
        out.push_back({"C4",
                       std::string("coupled vertex ") + x.id(a) + " in " + side + " has exactly one coupled descendant " +
                           x.id(lam[0]),
                       {x.id(a), x.id(lam[0])}});
    }
  };
  {
    std::vector<Vertex> pt, pg;
    for (const auto& [a, b] : pairs) {
      pt.push_back(a);
      pg.push_back(b);
    }
    std::sort(pt.begin(), pt.end());
    pt.erase(std::unique(pt.begin(), pt.end()), pt.end());
    std::sort(pg.begin(), pg.end());
    pg.erase(std::unique(pg.begin(), pg.end()), pg.end());
    c4(t, pt, "T");
    c4(g, pg, "G");
  }
  return out;
}

Coupling make_coupling_unchecked(const MergeTree& t, const MergeTree& g, PairSet pairs) {
  std::sort(pairs.begin(), pairs.end());
  Coupling c;
  c.t_ = &t;
  c.g_ = &g;
  c.partner_t_.assign(t.size(), kNoVertex);
  c.partner_g_.assign(g.size(), kNoVertex);
  for (const auto& [a, b] : pairs) {
    c.partner_t_[a] = b;
    c.partner_g_[b] = a;
    if (c.max_pair_.first == kNoVertex || t.height(a) > t.height(c.max_pair_.first)) c.max_pair_ = {a, b};
  }
  c.pairs_ = std::move(pairs);
  return c;
}

Coupling validate_coupling(const MergeTree& t, const MergeTree& g, PairSet pairs) {
  auto violations = check_coupling(t, g, pairs);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v.condition + ": " + v.message;
    throw CouplingError(msg, std::move(violations));
  }
  return make_coupling_unchecked(t, g, std::move(pairs));
}

Coupling validate_coupling_ids(const MergeTree& t, const MergeTree& g,
                               const std::vector<std::pair<std::string, std::string>>& pairs) {
  PairSet ps;
  for (const auto& [a, b] : pairs) ps.push_back({t.at(a), g.at(b)});
  return validate_coupling(t, g, std::move(ps));
}

Coupling Coupling::transposed() const {
  PairSet ps;
  for (const auto& [a, b] : pairs_) ps.push_back({b, a});
  return make_coupling_unchecked(*g_, *t_, std::move(ps));
}

const char* to_string(VertexClass c) {
  switch (c) {
    case VertexClass::kCoupled: return "coupled";
    case VertexClass::kUnused: return "unused";
    case VertexClass::kDeleted: return "deleted";
  }
  return "?";
}

const char* to_string(CostCase c) {
  switch (c) {
    case CostCase::kCouple: return "couple";
    case CostCase::kDeleteHalving: return "delete-lambda0-halving";
    case CostCase::kDeleteEta: return "delete-lambda0-eta";
    case CostCase::kDeleteMulti: return "delete-lambda-multi";
    case CostCase::kUnused: return "unused-zero";
  }
  return "?";
}

CouplingContext coupling_context(const Coupling& c) {
  CouplingContext ctx{c, {}, {}, 0.0};
  fill_side(c.t(), c.g(), c.partners_t(), ctx.t);
  fill_side(c.g(), c.t(), c.partners_g(), ctx.g);
  for (double x : ctx.t.cost) ctx.norm = std::max(ctx.norm, x);
  for (double x : ctx.g.cost) ctx.norm = std::max(ctx.norm, x);
  return ctx;
}

std::pair<double, CostCase> vertex_cost(const CouplingContext& ctx, bool in_t, Vertex v) {
  const SideContext& s = in_t ? ctx.t : ctx.g;
  return {s.cost.at(v), s.cost_case.at(v)};
}

CostReport coupling_norm(const CouplingContext& ctx) {
  CostReport r;
  r.t_cost = ctx.t.cost;
  r.g_cost = ctx.g.cost;
  r.t_case = ctx.t.cost_case;
  r.g_case = ctx.g.cost_case;
  r.norm_inf = ctx.norm;
  return r;
}

bool is_special(const CouplingContext& ctx) {
  auto side = [](const MergeTree& x, const SideContext& s, Vertex m) {
    Vertex best = kNoVertex;
    for (Vertex v = 0; v < x.size(); ++v)
      if (x.less(v, m) && (best == kNoVertex || x.height(v) < x.height(best))) best = v;
    return best == kNoVertex || s.cls[best] == VertexClass::kCoupled;
  };
  Pair m = ctx.coupling.max_pair();
  return side(ctx.coupling.t(), ctx.t, m.first) && side(ctx.coupling.g(), ctx.g, m.second);
}

NormEvaluator::NormEvaluator(const MergeTree& t, const MergeTree& g) : t_(t), g_(g) {}

double NormEvaluator::side(const MergeTree& x, const MergeTree& y, const std::vector<Vertex>& px,
                           const std::vector<Vertex>&, bool restricted) {
  SideCore core{count_, lam_lca_, low_partner_, phi_};
  compute_core(x, y, px, core);
  double best = 0.0;
  for (Vertex v = 0; v < x.size(); ++v) {
    double c;
    if (px[v] != kNoVertex) {
      c = std::fabs(x.height(v) - y.height(px[v]));
    } else if (count_[v] == 1) {
      continue;
    } else if (count_[v] == 0) {
      if (restricted) continue;
      c = deletion_zero_cost(x, y, px, core, v, nullptr, nullptr, nullptr);
    } else {
      c = std::fabs(x.height(v) - y.height(lam_lca_[v]));
    }
    best = std::max(best, c);
  }
  return best;
}

double NormEvaluator::norm(const std::vector<Vertex>& partner_t, const std::vector<Vertex>& partner_g) {
  return std::max(side(t_, g_, partner_t, partner_g, false), side(g_, t_, partner_g, partner_t, false));
}

double NormEvaluator::restricted_norm(const std::vector<Vertex>& partner_t, const std::vector<Vertex>& partner_g) {
  return std::max(side(t_, g_, partner_t, partner_g, true), side(g_, t_, partner_g, partner_t, true));
}

}  // namespace mti
