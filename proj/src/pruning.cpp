#include "mti/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mti {

PruneResult prune(const MergeTree& t, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("prune needs eps > 0");
  const std::size_t n = t.size();
  std::vector<Vertex> parent(n);
  std::vector<std::vector<Vertex>> children(n);
  std::vector<bool> alive(n, true);
  for (Vertex v = 0; v < n; ++v) {
    parent[v] = t.parent(v);
    children[v] = t.children(v);
  }
  PruneResult r{t, {}, {}, {}, eps, false};
  while (true) {
    Vertex best = kNoVertex;
    double best_gap = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      if (!alive[v] || !children[v].empty() || parent[v] == kNoVertex) continue;
      double gap = t.height(parent[v]) - t.height(v);
      if (best == kNoVertex || gap < best_gap) {
        best = v;
        best_gap = gap;
      }
    }
    if (best == kNoVertex || best_gap >= eps) break;
    RemovalStep step{t.id(best), best_gap, {}, false};
    alive[best] = false;
    Vertex p = parent[best];
    auto& sib = children[p];
    sib.erase(std::find(sib.begin(), sib.end(), best));
    if (sib.size() == 1) {
      Vertex c = sib.front();
      Vertex pp = parent[p];
      alive[p] = false;
      step.father = t.id(p);
      if (pp == kNoVertex) {
        parent[c] = kNoVertex;
        step.root_promoted = true;
      } else {
        parent[c] = pp;
        std::replace(children[pp].begin(), children[pp].end(), p, c);
      }
    }
    r.log.push_back(std::move(step));
  }
  std::vector<VertexRecord> recs;
  for (Vertex v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    VertexRecord rec{t.id(v), t.height(v), std::nullopt};
    if (parent[v] != kNoVertex) rec.parent = t.id(parent[v]);
    recs.push_back(std::move(rec));
  }
  r.tree = MergeTree::from_records(std::move(recs));
  for (Vertex v = 0; v < r.tree.size(); ++v) {
    Vertex o = t.at(r.tree.id(v));
    r.to_original.push_back(o);
    r.pairs.push_back({v, o});
  }
  r.degenerate = r.tree.size() == 1;
  return r;
}

Coupling pruning_coupling(const PruneResult& r, const MergeTree& original) {
  return validate_coupling(r.tree, original, r.pairs);
}

PruningLemmaReport check_pruning_lemma(const MergeTree& t, const PruneResult& r) {
  PruningLemmaReport rep;
  const MergeTree& p = r.tree;
  // The pruning is a coupling.
  auto violations = check_coupling(p, t, r.pairs);
  rep.coupling_valid = violations.empty();
  for (const auto& v : violations) rep.failures.push_back("coupling: " + v.condition + ": " + v.message);
  if (!rep.coupling_valid) return rep;
  auto ctx = coupling_context(validate_coupling(p, t, r.pairs));
  // Kept leaves come from the input.
  rep.leaves_kept = true;
  for (Vertex l : p.leaves())
    if (!t.is_leaf(r.to_original[l])) {
      rep.leaves_kept = false;
      rep.failures.push_back("leaves: " + p.id(l) + " is not a leaf of the input");
    }
  std::vector<Vertex> kept_leaves;
  for (Vertex l : p.leaves()) kept_leaves.push_back(r.to_original[l]);
  if (std::find(kept_leaves.begin(), kept_leaves.end(), t.argmin_height()) == kept_leaves.end()) {
    rep.leaves_kept = false;
    rep.failures.push_back("leaves: argmin " + t.id(t.argmin_height()) + " was removed");
  }
  for (Vertex v = 0; v < t.size(); ++v)
    for (Vertex w = 0; w < t.size(); ++w) {
      if (!t.less(w, v) || t.height(v) - t.height(w) < r.eps) continue;
      bool found = std::any_of(kept_leaves.begin(), kept_leaves.end(),
                               [&](Vertex l) { return t.less(t.lca(l, w), v); });
      if (!found) {
        rep.leaves_kept = false;
        rep.failures.push_back("leaves: no kept leaf merges with " + t.id(w) + " below " + t.id(v));
      }
    }
  // Deletions and eta, on the side of the input tree.
  rep.removed_lambda = true;
  rep.eta_lower = true;
  const SideContext& s = ctx.g;
  for (Vertex v = 0; v < t.size(); ++v) {
    if (s.cls[v] == VertexClass::kCoupled) continue;
    if (s.lambda[v].size() > 1) {
      rep.removed_lambda = false;
      rep.failures.push_back("deletion: " + t.id(v) + " has #Lambda > 1");
    }
    if (s.cls[v] != VertexClass::kDeleted) continue;
    if (!(t.height(s.phi[v]) - t.height(v) < r.eps)) {
      rep.removed_lambda = false;
      rep.failures.push_back("deletion: " + t.id(v) + " is too far from phi " + t.id(s.phi[v]));
    }
    if (!(p.height(s.eta[v]) < t.height(v))) {
      rep.eta_lower = false;
      rep.failures.push_back("eta: eta of " + t.id(v) + " is not lower");
    }
  }
  // Cost bound.
  rep.norm = ctx.norm;
  rep.cost_ok = ctx.norm <= r.eps / 2 + kTau;
  if (!rep.cost_ok) rep.failures.push_back("cost: cost " + std::to_string(ctx.norm) + " above eps/2");
  return rep;
}

std::vector<double> pruning_breakpoints(const MergeTree& t) {
  std::vector<double> out;
  for (Vertex l : t.leaves())
    for (Vertex a = t.parent(l); a != kNoVertex; a = t.parent(a)) out.push_back(t.height(a) - t.height(l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BudgetPrune prune_to_leaf_budget(const MergeTree& t, std::size_t max_leaves) {
  if (max_leaves == 0) throw std::invalid_argument("leaf budget must be positive");
  if (t.leaves().size() <= max_leaves) {
    PruneResult id = prune(t, std::numeric_limits<double>::min());
    return {0.0, std::move(id)};
  }
  auto bps = pruning_breakpoints(t);
  const double nudge = 1e-9 * std::max(1.0, t.height_span());
  for (std::size_t i = 0; i < bps.size(); ++i) {
    double step = nudge;
    if (i + 1 < bps.size()) step = std::min(step, 0.5 * (bps[i + 1] - bps[i]));
    double eps = bps[i] + step;
    PruneResult r = prune(t, eps);
    if (r.tree.leaves().size() <= max_leaves) return {eps, std::move(r)};
  }
  throw std::logic_error("leaf budget not reached above the last breakpoint");
}

}  // namespace mti
