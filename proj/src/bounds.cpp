#include "mti/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mti {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Half the drop to the meeting point, or the gap below the partner's minimum.
double side_penalty(const MergeTree& x, Vertex r, double other_min) {
  double h = -kInf;
  for (Vertex v = 0; v < x.size(); ++v) {
    if (x.leq(v, r)) continue;
    h = std::max(h, 0.5 * (x.height(x.lca(v, r)) - x.height(v)));
    h = std::max(h, other_min - x.height(v));
  }
  return h;
}

// Going up with one side a single vertex x: couple x with the lowest leaf of
// the other subtree; everything off that leaf's path is deleted towards it.
double mixed_up(const MergeTree& x, Vertex v, const MergeTree& y, Vertex w, Vertex& low) {
  low = y.subtree_argmin(w);
  double c = std::fabs(x.height(v) - y.height(low));
  for (Vertex u : y.subtree_vertices(w)) {
    if (y.comparable(u, low)) continue;
    c = std::max(c, 0.5 * (y.height(y.lca(u, low)) - y.height(u)));
    c = std::max(c, x.height(v) - y.height(u));
  }
  return c;
}

// Going down: the root pair alone, everything else deleted.
double mixed_down(const MergeTree& x, Vertex v, const MergeTree& y, Vertex w) {
  double gmin = y.subtree_min_height(w);
  return std::max({std::fabs(x.height(v) - y.height(w)), 0.5 * (y.height(w) - gmin), x.height(v) - gmin});
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

double deletion_penalty(const MergeTree& t, const MergeTree& g, Vertex r, Vertex rp) {
  double h = std::max(side_penalty(t, r, g.subtree_min_height(rp)), side_penalty(g, rp, t.subtree_min_height(r)));
  return std::max(0.0, h);
}

std::vector<Pair> bottom_up_order(const MergeTree& t, const MergeTree& g) {
  LenLvl lt = len_lvl(t), lg = len_lvl(g);
  std::vector<Pair> order;
  for (Vertex x = 0; x < t.size(); ++x)
    for (Vertex y = 0; y < g.size(); ++y) order.push_back({x, y});
  std::sort(order.begin(), order.end(), [&](const Pair& a, const Pair& b) {
    auto ka = std::make_tuple(lt.lvl[a.first], lg.lvl[a.second], a.first, a.second);
    auto kb = std::make_tuple(lt.lvl[b.first], lg.lvl[b.second], b.first, b.second);
    return ka < kb;
  });
  return order;
}

BottomUpResult bottom_up(const MergeTree& t, const MergeTree& g, const BottomUpOptions& opt) {
  BottomUpResult res{CostTable(t.size(), g.size()), std::vector<PairSet>(t.size() * g.size()), 0};
  const bool up = opt.direction == Direction::kUp;
  for (const auto& [x, y] : bottom_up_order(t, g)) {
    double w;
    PairSet& sel = res.selection[x * g.size() + y];
    if (t.is_leaf(x) && g.is_leaf(y)) {
      w = std::fabs(t.height(x) - g.height(y));
      sel = {{x, y}};
    } else if (t.is_leaf(x)) {
      Vertex low = y;
      w = up ? mixed_up(t, x, g, y, low) : mixed_down(t, x, g, y);
      sel = {{x, low}};
    } else if (g.is_leaf(y)) {
      Vertex low = x;
      w = up ? mixed_up(g, y, t, x, low) : mixed_down(g, y, t, x);
      sel = {{low, y}};
    } else {
      auto p = linearize(build_program(t, g, x, y, res.w, opt.direction, opt.penalty));
      auto s = solve_exact(p);
      w = s.value;
      sel = std::move(s.selected);
      res.nodes += s.nodes;
    }
    if (opt.inject && opt.inject->x == x && opt.inject->y == y) w += opt.inject->amount;
    res.w.set(x, y, w);
  }
  return res;
}

PairSet unwind_witness(const MergeTree& t, const MergeTree& g, const BottomUpResult& up, Vertex x, Vertex y) {
  const PairSet& s = up.selected(x, y);
  if (t.is_leaf(x) || g.is_leaf(y)) return s;
  PairSet out;
  for (const auto& [a, b] : s) {
    PairSet sub = unwind_witness(t, g, up, a, b);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  if (s.size() != 1) out.push_back({x, y});
  std::sort(out.begin(), out.end());
  return out;
}

BoundsResult interleaving_bounds(const MergeTree& t, const MergeTree& g, const BoundsOptions& opt) {
  BoundsResult res;
  res.h = CostTable(t.size(), g.size());
  for (Vertex x = 0; x < t.size(); ++x)
    for (Vertex y = 0; y < g.size(); ++y) res.h.set(x, y, deletion_penalty(t, g, x, y));
  auto best = [&](const CostTable& w, Pair& arg) {
    double b = kInf;
    for (Vertex x = 0; x < t.size(); ++x)
      for (Vertex y = 0; y < g.size(); ++y) {
        if (res.h.at(x, y) >= b) continue;
        double v = std::max(res.h.at(x, y), w.at(x, y));
        if (v < b) {
          b = v;
          arg = {x, y};
        }
      }
    return b;
  };
  if (opt.lower) {
    auto t0 = std::chrono::steady_clock::now();
    auto down = bottom_up(t, g, {Direction::kDown, opt.penalty, std::nullopt});
    res.w_down = std::move(down.w);
    res.d_lower = best(res.w_down, res.lower_pair);
    res.nodes += down.nodes;
    res.ms_lower = elapsed_ms(t0);
  }
  if (opt.upper) {
    auto t0 = std::chrono::steady_clock::now();
    auto up = bottom_up(t, g, {Direction::kUp, opt.penalty, opt.inject});
    res.d_upper = best(up.w, res.upper_pair);
    res.witness = unwind_witness(t, g, up, res.upper_pair.first, res.upper_pair.second);
    res.w_up = std::move(up.w);
    res.nodes += up.nodes;
    auto violations = check_coupling(t, g, res.witness);
    if (!violations.empty())
      throw std::logic_error("assembled witness is not a coupling: " + violations.front().message);
    auto ctx = coupling_context(validate_coupling(t, g, res.witness));
    res.witness_norm = ctx.norm;
    res.witness_special = is_special(ctx);
    res.ms_upper = elapsed_ms(t0);
  }
  return res;
}

DOptResult d_opt(const MergeTree& t, const MergeTree& g, std::size_t max_leaves, const BoundsOptions& opt) {
  if (max_leaves < 2) throw std::invalid_argument("d_opt needs a leaf budget of at least 2");
  BudgetPrune bt = prune_to_leaf_budget(t, max_leaves), bg = prune_to_leaf_budget(g, max_leaves);
  double eps = std::max(bt.eps, bg.eps);
  DOptResult r{0.0, eps, std::move(bt.result), std::move(bg.result), {}};
  if (eps > 0) {
    r.pruned_t = prune(t, eps);
    r.pruned_g = prune(g, eps);
  }
  BoundsOptions o = opt;
  o.lower = false;
  r.bounds = interleaving_bounds(r.pruned_t.tree, r.pruned_g.tree, o);
  r.value = std::max(eps / 2, r.bounds.d_upper);
  return r;
}

}  // namespace mti
