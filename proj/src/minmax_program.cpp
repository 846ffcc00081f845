#include "mti/minmax_program.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace mti {

CostTable::CostTable(std::size_t nt, std::size_t ng)
    : nt_(nt), ng_(ng), v_(nt * ng, std::numeric_limits<double>::quiet_NaN()) {}

bool CostTable::has(Vertex x, Vertex y) const { return x < nt_ && y < ng_ && !std::isnan(at(x, y)); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Side {
  std::vector<Vertex> verts;
  std::vector<int> par;
  std::vector<double> h, sub, a, pen;
  std::vector<int> path;
};

Side make_side(const MergeTree& x, Vertex root, const MergeTree& y, Vertex other_root, Penalty penalty) {
  Side s;
  std::vector<int> local(x.size(), -1);
  for (Vertex v : x.subtree_vertices(root))
    if (v != root) {
      local[v] = static_cast<int>(s.verts.size());
      s.verts.push_back(v);
    }
  for (Vertex v : s.verts) {
    Vertex p = x.parent(v);
    s.par.push_back(p == root ? -1 : local[p]);
    s.h.push_back(x.height(v));
    s.sub.push_back(x.subtree_min_height(v));
    s.a.push_back(0.5 * (x.height(p) - x.subtree_min_height(v)));
    s.pen.push_back(penalty == Penalty::kRoot ? y.height(other_root) - x.height(v) : x.height(p) - x.height(v));
  }
  for (Vertex v = x.subtree_argmin(root); v != root; v = x.parent(v)) s.path.push_back(local[v]);
  return s;
}

std::size_t count_leaves(const MergeTree& x, Vertex root) {
  std::size_t n = 0;
  for (Vertex v : x.subtree_vertices(root))
    if (x.is_leaf(v)) ++n;
  return n;
}

}  // namespace

MinMaxProgram build_program(const MergeTree& t, const MergeTree& g, Vertex x0, Vertex y0, const CostTable& table,
                            Direction direction, Penalty penalty) {
  if (t.is_leaf(x0) || g.is_leaf(y0))
    throw std::invalid_argument("min-max program needs internal roots on both sides");
  MinMaxProgram p;
  p.direction = direction;
  p.penalty = penalty;
  p.t = &t;
  p.g = &g;
  p.x0 = x0;
  p.y0 = y0;
  Side st = make_side(t, x0, g, y0, penalty);
  Side sg = make_side(g, y0, t, x0, penalty);
  p.tv = st.verts;
  p.tpar = st.par;
  p.tf = st.h;
  p.tsub = st.sub;
  p.ta = st.a;
  p.tpen = st.pen;
  p.tpath = st.path;
  p.gv = sg.verts;
  p.gpar = sg.par;
  p.gf = sg.h;
  p.gsub = sg.sub;
  p.ga = sg.a;
  p.gpen = sg.pen;
  p.gpath = sg.path;
  p.cost.resize(p.tv.size() * p.gv.size());
  double lo = std::min(t.subtree_min_height(x0), g.subtree_min_height(y0));
  double hi = std::max(t.height(x0), g.height(y0));
  double maxdiff = 0.0;
  for (std::size_t i = 0; i < p.tv.size(); ++i)
    for (std::size_t j = 0; j < p.gv.size(); ++j) {
      if (!table.has(p.tv[i], p.gv[j]))
        throw std::invalid_argument("missing cost_table entry (" + t.id(p.tv[i]) + "," + g.id(p.gv[j]) + ")");
      p.cost[i * p.gv.size() + j] = table.at(p.tv[i], p.gv[j]);
    }
  for (Vertex v : t.subtree_vertices(x0))
    for (Vertex w : g.subtree_vertices(y0)) maxdiff = std::max(maxdiff, std::fabs(t.height(v) - g.height(w)));
  p.root_term = std::fabs(t.height(x0) - g.height(y0));
  p.m_t = 1.0 / (count_leaves(t, x0) + 1.0);
  p.q_t = -1.5 * p.m_t;
  p.m_g = 1.0 / (count_leaves(g, y0) + 1.0);
  p.q_g = -1.5 * p.m_g;
  p.big_k = maxdiff + (hi - lo);
  return p;
}

MinMaxProgram linearize(MinMaxProgram p) {
  p.linearized = true;
  return p;
}

ExplicitProgram explicit_program(const MinMaxProgram& p) {
  const MergeTree& t = *p.t;
  const MergeTree& g = *p.g;
  const std::size_t nt = p.nt(), ng = p.ng();
  const bool up = p.direction == Direction::kUp;
  ExplicitProgram e;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < ng; ++j)
      e.vars.push_back({VarKind::kA, "a[" + t.id(p.tv[i]) + "," + g.id(p.gv[j]) + "]", p.tv[i], p.gv[j]});
  for (std::size_t i = 0; i < nt; ++i) e.vars.push_back({VarKind::kU, "u[" + t.id(p.tv[i]) + "]", p.tv[i], kNoVertex});
  for (std::size_t j = 0; j < ng; ++j) e.vars.push_back({VarKind::kU, "u[" + g.id(p.gv[j]) + "]", kNoVertex, p.gv[j]});
  const std::size_t z = e.vars.size();
  if (p.linearized) e.vars.push_back({VarKind::kZ, "z", kNoVertex, kNoVertex});
  auto a = [&](std::size_t i, std::size_t j) { return i * ng + j; };
  auto ut = [&](std::size_t i) { return nt * ng + i; };
  auto ug = [&](std::size_t j) { return nt * ng + nt + j; };
  // c over a set of T locals (resp. G locals), scaled.
  auto c_t = [&](std::vector<LinTerm>& out, const std::vector<std::size_t>& is, double k) {
    for (std::size_t i : is)
      for (std::size_t j = 0; j < ng; ++j) out.push_back({a(i, j), k});
  };
  auto c_g = [&](std::vector<LinTerm>& out, const std::vector<std::size_t>& js, double k) {
    for (std::size_t j : js)
      for (std::size_t i = 0; i < nt; ++i) out.push_back({a(i, j), k});
  };
  auto below_t = [&](std::size_t i) {
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k < nt; ++k)
      if (p.t_leq(k, i)) r.push_back(k);
    return r;
  };
  auto below_g = [&](std::size_t j) {
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k < ng; ++k)
      if (p.g_leq(k, j)) r.push_back(k);
    return r;
  };
  auto comparable_t = [&](std::size_t i) {
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k < nt; ++k)
      if (p.t_leq(k, i) || p.t_leq(i, k)) r.push_back(k);
    return r;
  };
  auto comparable_g = [&](std::size_t j) {
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k < ng; ++k)
      if (p.g_leq(k, j) || p.g_leq(j, k)) r.push_back(k);
    return r;
  };
  // One selected vertex per leaf-to-root path.
  for (std::size_t i = 0; i < nt; ++i) {
    if (!t.is_leaf(p.tv[i])) continue;
    Row r{"path", {}, false, 1.0};
    std::vector<std::size_t> path;
    for (int k = static_cast<int>(i); k != -1; k = p.tpar[k]) path.push_back(k);
    c_t(r.terms, path, 1.0);
    e.rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < ng; ++j) {
    if (!g.is_leaf(p.gv[j])) continue;
    Row r{"path", {}, false, 1.0};
    std::vector<std::size_t> path;
    for (int k = static_cast<int>(j); k != -1; k = p.gpar[k]) path.push_back(k);
    c_g(r.terms, path, 1.0);
    e.rows.push_back(std::move(r));
  }
  // u_upper and u_lower pin u to [Lambda >= 2].
  for (std::size_t i = 0; i < nt; ++i) {
    Row r2{"u_upper", {{ut(i), 1.0}}, false, 0.0};
    c_t(r2.terms, below_t(i), -0.5);
    Row r3{"u_lower", {{ut(i), 1.0}}, true, p.q_t};
    c_t(r3.terms, below_t(i), -p.m_t);
    e.rows.push_back(std::move(r2));
    e.rows.push_back(std::move(r3));
  }
  for (std::size_t j = 0; j < ng; ++j) {
    Row r2{"u_upper", {{ug(j), 1.0}}, false, 0.0};
    c_g(r2.terms, below_g(j), -0.5);
    Row r3{"u_lower", {{ug(j), 1.0}}, true, p.q_g};
    c_g(r3.terms, below_g(j), -p.m_g);
    e.rows.push_back(std::move(r2));
    e.rows.push_back(std::move(r3));
  }
  // Anchor rows: something selected above the lowest vertex, on both sides.
  if (up) {
    Row rt{"anchor", {}, true, 1.0};
    c_t(rt.terms, std::vector<std::size_t>(p.tpath.begin(), p.tpath.end()), 1.0);
    Row rg{"anchor", {}, true, 1.0};
    c_g(rg.terms, std::vector<std::size_t>(p.gpath.begin(), p.gpath.end()), 1.0);
    e.rows.push_back(std::move(rt));
    e.rows.push_back(std::move(rg));
  }
  // Objective components.
  e.components.push_back({"R", {}, p.root_term});
  for (std::size_t i = 0; i < nt; ++i) {
    const std::string id = t.id(p.tv[i]);
    Component f1{"F1[" + id + "]", {}, 0.0};
    for (std::size_t j = 0; j < ng; ++j) f1.terms.push_back({a(i, j), p.w(i, j)});
    e.components.push_back(std::move(f1));
    if (up) e.components.push_back({"F2[" + id + "]", {{ut(i), p.tpen[i]}}, 0.0});
    Component ax{"A[" + id + "]", {}, p.ta[i]};
    c_t(ax.terms, comparable_t(i), -p.ta[i]);
    e.components.push_back(std::move(ax));
    if (!up) continue;
    for (std::size_t v = 0; v < nt; ++v) {
      bool under = p.tpar[i] == -1 ? true : (v != static_cast<std::size_t>(p.tpar[i]) && p.t_leq(v, p.tpar[i]));
      if (!under) continue;
      Component b{"B[" + id + "," + t.id(p.tv[v]) + "]", {}, 0.0};
      for (std::size_t j = 0; j < ng; ++j) b.terms.push_back({a(v, j), p.gsub[j] - p.tsub[i]});
      c_t(b.terms, comparable_t(i), -p.big_k);
      e.components.push_back(std::move(b));
    }
  }
  for (std::size_t j = 0; j < ng; ++j) {
    const std::string id = g.id(p.gv[j]);
    if (up) e.components.push_back({"F2[" + id + "]", {{ug(j), p.gpen[j]}}, 0.0});
    Component ay{"A[" + id + "]", {}, p.ga[j]};
    c_g(ay.terms, comparable_g(j), -p.ga[j]);
    e.components.push_back(std::move(ay));
    if (!up) continue;
    for (std::size_t w = 0; w < ng; ++w) {
      bool under = p.gpar[j] == -1 ? true : (w != static_cast<std::size_t>(p.gpar[j]) && p.g_leq(w, p.gpar[j]));
      if (!under) continue;
      Component b{"B[" + id + "," + g.id(p.gv[w]) + "]", {}, 0.0};
      for (std::size_t i = 0; i < nt; ++i) b.terms.push_back({a(i, w), p.tsub[i] - p.gsub[j]});
      c_g(b.terms, comparable_g(j), -p.big_k);
      e.components.push_back(std::move(b));
    }
  }
  if (p.linearized) {
    for (const auto& c : e.components) {
      Row r{c.label.front() == 'B' ? "epigraph_b" : "epigraph", {{z, 1.0}}, true, c.constant};
      for (const auto& term : c.terms) r.terms.push_back({term.var, -term.coef});
      e.rows.push_back(std::move(r));
    }
  }
  return e;
}

namespace {

// Complete search for a selection with objective <= z.
class Decider {
 public:
  explicit Decider(const MinMaxProgram& p) : p_(p), nt_(p.nt()), ng_(p.ng()), up_(p.direction == Direction::kUp) {
    tanc_.resize(nt_);
    tsub_.resize(nt_);
    for (std::size_t i = 0; i < nt_; ++i)
      for (std::size_t k = 0; k < nt_; ++k) {
        if (k != i && p.t_leq(i, k)) tanc_[i].push_back(k);
        if (p.t_leq(k, i)) tsub_[i].push_back(k);
      }
    ganc_.resize(ng_);
    gsub_.resize(ng_);
    for (std::size_t j = 0; j < ng_; ++j)
      for (std::size_t k = 0; k < ng_; ++k) {
        if (k != j && p.g_leq(j, k)) ganc_[j].push_back(k);
        if (p.g_leq(k, j)) gsub_[j].push_back(k);
      }
  }

  bool feasible(double z, std::vector<std::pair<int, int>>& out, std::size_t& nodes) {
    z_ = z;
    selt_.assign(nt_, -1);
    selg_.assign(ng_, -1);
    cntt_.assign(nt_, 0);
    anct_.assign(nt_, 0);
    cntg_.assign(ng_, 0);
    ancg_.assign(ng_, 0);
    forb_.assign(nt_ * ng_, 0);
    chosen_.clear();
    failed_.clear();
    nodes_ = 0;
    bool ok = search();
    nodes += nodes_;
    if (ok) out = chosen_;
    return ok;
  }

 private:
  struct Requirement {
    bool t_side;
    std::vector<std::size_t> region;
  };

  bool allowed(std::size_t i, std::size_t j) const {
    if (forb_[i * ng_ + j] || p_.w(i, j) > z_) return false;
    if (cntt_[i] || anct_[i] || cntg_[j] || ancg_[j]) return false;
    if (up_) {
      for (std::size_t a : tanc_[i])
        if (cntt_[a] >= 1 && p_.tpen[a] > z_) return false;
      for (std::size_t b : ganc_[j])
        if (cntg_[b] >= 1 && p_.gpen[b] > z_) return false;
    }
    return true;
  }

  void toggle(std::size_t i, std::size_t j, int d) {
    selt_[i] = d > 0 ? static_cast<int>(j) : -1;
    selg_[j] = d > 0 ? static_cast<int>(i) : -1;
    cntt_[i] += d;
    for (std::size_t a : tanc_[i]) cntt_[a] += d;
    for (std::size_t k : tsub_[i])
      if (k != i) anct_[k] += d;
    cntg_[j] += d;
    for (std::size_t b : ganc_[j]) cntg_[b] += d;
    for (std::size_t k : gsub_[j])
      if (k != j) ancg_[k] += d;
  }

  void options(const Requirement& r, std::vector<std::pair<int, int>>& out, std::size_t limit) const {
    out.clear();
    for (std::size_t k : r.region) {
      if (r.t_side) {
        for (std::size_t j = 0; j < ng_; ++j)
          if (allowed(k, j)) {
            out.push_back({static_cast<int>(k), static_cast<int>(j)});
            if (out.size() > limit) return;
          }
      } else {
        for (std::size_t i = 0; i < nt_; ++i)
          if (allowed(i, k)) {
            out.push_back({static_cast<int>(i), static_cast<int>(k)});
            if (out.size() > limit) return;
          }
      }
    }
  }

  std::vector<Requirement> requirements() const {
    std::vector<Requirement> reqs;
    // Highest partner subtree minimum selected below each father; x0 side is index nt_.
    std::vector<double> tmax(nt_ + 1, -kInf), gmax(ng_ + 1, -kInf);
    if (up_) {
      for (const auto& [i, j] : chosen_) {
        double gv = p_.gsub[j], tv = p_.tsub[i];
        tmax[nt_] = std::max(tmax[nt_], gv);
        for (std::size_t a : tanc_[i]) tmax[a] = std::max(tmax[a], gv);
        gmax[ng_] = std::max(gmax[ng_], tv);
        for (std::size_t b : ganc_[j]) gmax[b] = std::max(gmax[b], tv);
      }
    }
    for (std::size_t i = 0; i < nt_; ++i) {
      if (cntt_[i] || anct_[i]) continue;
      if (p_.ta[i] > z_) {
        Requirement r{true, tsub_[i]};
        r.region.insert(r.region.end(), tanc_[i].begin(), tanc_[i].end());
        reqs.push_back(std::move(r));
      }
      if (up_) {
        double m = tmax[p_.tpar[i] == -1 ? nt_ : static_cast<std::size_t>(p_.tpar[i])];
        if (m - p_.tsub[i] > z_) reqs.push_back({true, tsub_[i]});
      }
    }
    for (std::size_t j = 0; j < ng_; ++j) {
      if (cntg_[j] || ancg_[j]) continue;
      if (p_.ga[j] > z_) {
        Requirement r{false, gsub_[j]};
        r.region.insert(r.region.end(), ganc_[j].begin(), ganc_[j].end());
        reqs.push_back(std::move(r));
      }
      if (up_) {
        double m = gmax[p_.gpar[j] == -1 ? ng_ : static_cast<std::size_t>(p_.gpar[j])];
        if (m - p_.gsub[j] > z_) reqs.push_back({false, gsub_[j]});
      }
    }
    if (up_) {
      auto covered_t = std::any_of(p_.tpath.begin(), p_.tpath.end(), [&](int k) { return selt_[k] != -1; });
      if (!covered_t) reqs.push_back({true, std::vector<std::size_t>(p_.tpath.begin(), p_.tpath.end())});
      auto covered_g = std::any_of(p_.gpath.begin(), p_.gpath.end(), [&](int k) { return selg_[k] != -1; });
      if (!covered_g) reqs.push_back({false, std::vector<std::size_t>(p_.gpath.begin(), p_.gpath.end())});
    }
    return reqs;
  }

  // Going down, the open requirements and allowed pairs depend only on which
  // vertices are used, so failures are cached under that key and branches
  // need no partition. Going up, the B terms see the pairing itself, so
  // branches are partitioned by forbidding pairs already tried.
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (std::uint64_t w : k) h = (h ^ w) * 0x100000001b3ULL;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  std::vector<std::uint64_t> used_key() const {
    std::vector<std::uint64_t> k((nt_ + 63) / 64 + (ng_ + 63) / 64, 0);
    const std::size_t off = (nt_ + 63) / 64;
    for (const auto& [i, j] : chosen_) {
      k[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
      k[off + static_cast<std::size_t>(j) / 64] |= std::uint64_t{1} << (j % 64);
    }
    return k;
  }

  bool search() {
    ++nodes_;
    std::vector<std::uint64_t> key;
    if (!up_) {
      key = used_key();
      if (failed_.count(key)) return false;
    }
    bool ok = branch();
    if (!ok && !up_ && failed_.size() < kMemoCap) failed_.insert(std::move(key));
    return ok;
  }

  bool branch() {
    auto reqs = requirements();
    if (reqs.empty()) return true;
    std::vector<std::pair<int, int>> best, opts;
    bool have = false;
    for (const auto& r : reqs) {
      options(r, opts, have ? best.size() : std::numeric_limits<std::size_t>::max());
      if (opts.empty()) return false;
      if (!have || opts.size() < best.size()) {
        best = opts;
        have = true;
      }
    }
    std::sort(best.begin(), best.end(), [&](const auto& a, const auto& b) {
      double wa = p_.w(a.first, a.second), wb = p_.w(b.first, b.second);
      return wa != wb ? wa < wb : a < b;
    });
    bool found = false;
    std::size_t k = 0;
    for (; k < best.size() && !found; ++k) {
      auto [i, j] = best[k];
      toggle(i, j, +1);
      chosen_.push_back(best[k]);
      found = search();
      if (!found) {
        chosen_.pop_back();
        toggle(i, j, -1);
        if (up_) forb_[i * ng_ + j] = 1;
      }
    }
    // Options tried on this branch are only forbidden below it.
    if (up_)
      for (std::size_t r = 0; r < k; ++r) forb_[best[r].first * ng_ + best[r].second] = 0;
    return found;
  }

  const MinMaxProgram& p_;
  std::size_t nt_, ng_;
  bool up_;
  std::vector<std::vector<std::size_t>> tanc_, tsub_, ganc_, gsub_;
  double z_ = 0.0;
  std::vector<int> selt_, selg_, cntt_, anct_, cntg_, ancg_;
  std::vector<char> forb_;
  std::vector<std::pair<int, int>> chosen_;
  static constexpr std::size_t kMemoCap = std::size_t{1} << 22;
  std::unordered_set<std::vector<std::uint64_t>, KeyHash> failed_;
  std::size_t nodes_ = 0;
};

}  // namespace

double evaluate_selection(const MinMaxProgram& p, const std::vector<std::pair<int, int>>& sel) {
  const std::size_t nt = p.nt(), ng = p.ng();
  const bool up = p.direction == Direction::kUp;
  std::vector<int> cnt_t(nt, 0), cnt_g(ng, 0), cmp_t(nt, 0), cmp_g(ng, 0);
  std::vector<int> part_t(nt, -1), part_g(ng, -1);
  for (const auto& [i, j] : sel) {
    if (part_t[i] != -1 || part_g[j] != -1) return kInf;
    part_t[i] = j;
    part_g[j] = i;
  }
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t k = 0; k < nt; ++k) {
      if (part_t[k] == -1) continue;
      if (p.t_leq(k, i)) ++cnt_t[i];
      if (p.t_leq(k, i) || p.t_leq(i, k)) ++cmp_t[i];
    }
  for (std::size_t j = 0; j < ng; ++j)
    for (std::size_t k = 0; k < ng; ++k) {
      if (part_g[k] == -1) continue;
      if (p.g_leq(k, j)) ++cnt_g[j];
      if (p.g_leq(k, j) || p.g_leq(j, k)) ++cmp_g[j];
    }
  // Selected vertices form antichains.
  for (std::size_t i = 0; i < nt; ++i)
    if (part_t[i] != -1 && cmp_t[i] > 1) return kInf;
  for (std::size_t j = 0; j < ng; ++j)
    if (part_g[j] != -1 && cmp_g[j] > 1) return kInf;
  if (up) {
    bool ct = std::any_of(p.tpath.begin(), p.tpath.end(), [&](int k) { return part_t[k] != -1; });
    bool cg = std::any_of(p.gpath.begin(), p.gpath.end(), [&](int k) { return part_g[k] != -1; });
    if (!ct || !cg) return kInf;
  }
  double obj = p.root_term;
  for (std::size_t i = 0; i < nt; ++i) {
    if (part_t[i] != -1) obj = std::max(obj, p.w(i, part_t[i]));
    if (up && cnt_t[i] >= 2) obj = std::max(obj, p.tpen[i]);
    if (cmp_t[i] == 0) {
      obj = std::max(obj, p.ta[i]);
      if (up)
        for (std::size_t v = 0; v < nt; ++v) {
          bool under = p.tpar[i] == -1 || (v != static_cast<std::size_t>(p.tpar[i]) && p.t_leq(v, p.tpar[i]));
          if (under && part_t[v] != -1) obj = std::max(obj, p.gsub[part_t[v]] - p.tsub[i]);
        }
    }
  }
  for (std::size_t j = 0; j < ng; ++j) {
    if (up && cnt_g[j] >= 2) obj = std::max(obj, p.gpen[j]);
    if (cmp_g[j] == 0) {
      obj = std::max(obj, p.ga[j]);
      if (up)
        for (std::size_t w = 0; w < ng; ++w) {
          bool under = p.gpar[j] == -1 || (w != static_cast<std::size_t>(p.gpar[j]) && p.g_leq(w, p.gpar[j]));
          if (under && part_g[w] != -1) obj = std::max(obj, p.tsub[part_g[w]] - p.gsub[j]);
        }
    }
  }
  return obj;
}

SolveResult solve_exact(const MinMaxProgram& p) {
  if (!p.linearized) throw std::invalid_argument("solve_exact needs a linearized program");
  const std::size_t nt = p.nt(), ng = p.ng();
  const bool up = p.direction == Direction::kUp;
  std::vector<double> cand{p.root_term};
  cand.insert(cand.end(), p.cost.begin(), p.cost.end());
  cand.insert(cand.end(), p.ta.begin(), p.ta.end());
  cand.insert(cand.end(), p.ga.begin(), p.ga.end());
  if (up) {
    cand.insert(cand.end(), p.tpen.begin(), p.tpen.end());
    cand.insert(cand.end(), p.gpen.begin(), p.gpen.end());
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < ng; ++j) {
        cand.push_back(p.gsub[j] - p.tsub[i]);
        cand.push_back(p.tsub[i] - p.gsub[j]);
      }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.erase(cand.begin(), std::lower_bound(cand.begin(), cand.end(), p.root_term));

  Decider d(p);
  SolveResult res;
  std::vector<std::pair<int, int>> sel, best;
  ++res.decisions;
  if (!d.feasible(cand.back(), best, res.nodes)) throw std::logic_error("min-max program is infeasible");
  std::size_t lo = 0, hi = cand.size() - 1;  // cand[hi] feasible
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    ++res.decisions;
    if (d.feasible(cand[mid], sel, res.nodes)) {
      hi = mid;
      best = sel;
    } else {
      lo = mid + 1;
    }
  }
  res.value = evaluate_selection(p, best);
  // Among optimal selections prefer a maximal one: add cheap pairs while the
  // value holds.
  std::vector<std::pair<int, int>> order;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < ng; ++j) order.push_back({static_cast<int>(i), static_cast<int>(j)});
  std::stable_sort(order.begin(), order.end(),
                   [&](const auto& a, const auto& b) { return p.w(a.first, a.second) < p.w(b.first, b.second); });
  for (const auto& c : order) {
    best.push_back(c);
    if (!(evaluate_selection(p, best) <= res.value)) best.pop_back();
  }
  std::sort(best.begin(), best.end());
  if (res.value > cand[hi]) throw std::logic_error("min-max search returned a selection above its bound");
  for (const auto& [i, j] : best) res.selected.push_back({p.tv[i], p.gv[j]});
  std::sort(res.selected.begin(), res.selected.end());
  // Assignment in explicit_program order: a (row-major), u_T, u_G, z.
  res.assignment.assign(nt * ng + nt + ng + 1, 0.0);
  std::vector<int> lam_t(nt, 0), lam_g(ng, 0);
  for (const auto& [i, j] : best) {
    res.assignment[i * ng + j] = 1.0;
    for (std::size_t k = 0; k < nt; ++k)
      if (p.t_leq(i, k)) ++lam_t[k];
    for (std::size_t k = 0; k < ng; ++k)
      if (p.g_leq(j, k)) ++lam_g[k];
  }
  for (std::size_t i = 0; i < nt; ++i) res.assignment[nt * ng + i] = lam_t[i] >= 2 ? 1.0 : 0.0;
  for (std::size_t j = 0; j < ng; ++j) res.assignment[nt * ng + nt + j] = lam_g[j] >= 2 ? 1.0 : 0.0;
  res.assignment.back() = res.value;
  return res;
}

}  // namespace mti
