#include "mti/exact_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace mti {

namespace {

using Clock = std::chrono::steady_clock;
using Cont = std::function<void()>;

void check_cap(const MergeTree& t, const MergeTree& g, const OracleLimits& lim) {
  if (t.leaves().size() > lim.max_leaves || g.leaves().size() > lim.max_leaves)
    throw CapExceeded("oracle cap of " + std::to_string(lim.max_leaves) +
                      " leaves per tree exceeded; use the bounds pipeline");
}

// Generates every coupling exactly once: a coupling is its maximal pair
// plus rooted couplings below an antichain of at least two pairs.
class Enumerator {
 public:
  Enumerator(const MergeTree& t, const MergeTree& g, const OracleLimits& lim)
      : t_(t), g_(g), pt_(t.size(), kNoVertex), pg_(g.size(), kNoVertex), timeout_(lim.timeout_s),
        start_(Clock::now()) {}

  double bound = INFINITY;
  std::size_t visited = 0;

  const std::vector<Pair>& stack() const { return stack_; }
  std::vector<Vertex>& pt() { return pt_; }
  std::vector<Vertex>& pg() { return pg_; }

  void rooted(Vertex x, Vertex y, const Cont& k) {
    tick();
    if (std::fabs(t_.height(x) - g_.height(y)) > bound) return;
    stack_.push_back({x, y});
    pt_[x] = y;
    pg_[y] = x;
    k();
    std::vector<Pair> cand;
    for (Vertex a : t_.subtree_vertices(x)) {
      if (a == x) continue;
      for (Vertex b : g_.subtree_vertices(y))
        if (b != y && std::fabs(t_.height(a) - g_.height(b)) <= bound) cand.push_back({a, b});
    }
    std::vector<Pair> chosen;
    antichains(cand, 0, chosen, k);
    pt_[x] = kNoVertex;
    pg_[y] = kNoVertex;
    stack_.pop_back();
  }

 private:
  void tick() {
    if ((++visited & 1023) == 0 && std::chrono::duration<double>(Clock::now() - start_).count() > timeout_)
      throw TimeoutError("oracle timeout after " + std::to_string(timeout_) + " s");
  }

  void antichains(const std::vector<Pair>& cand, std::size_t from, std::vector<Pair>& chosen, const Cont& k) {
    for (std::size_t i = from; i < cand.size(); ++i) {
      const auto [a, b] = cand[i];
      bool ok = true;
      for (const auto& [c, d] : chosen)
        if (t_.comparable(a, c) || g_.comparable(b, d)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(cand[i]);
      if (chosen.size() >= 2) expand(chosen, 0, k);
      antichains(cand, i + 1, chosen, k);
      chosen.pop_back();
    }
  }

  void expand(const std::vector<Pair>& m, std::size_t i, const Cont& k) {
    if (i == m.size()) {
      k();
      return;
    }
    rooted(m[i].first, m[i].second, [&] { expand(m, i + 1, k); });
  }

  const MergeTree& t_;
  const MergeTree& g_;
  std::vector<Pair> stack_;
  std::vector<Vertex> pt_, pg_;
  double timeout_;
  Clock::time_point start_;
};

PairSet sorted(PairSet p) {
  std::sort(p.begin(), p.end());
  return p;
}

bool special_partners(const MergeTree& t, const MergeTree& g, const std::vector<Vertex>& pt,
                      const std::vector<Vertex>& pg) {
  Vertex rt = t.root(), rg = g.root();
  bool ok_t = t.is_leaf(rt) || pt[t.argmin_height()] != kNoVertex;
  bool ok_g = g.is_leaf(rg) || pg[g.argmin_height()] != kNoVertex;
  return ok_t && ok_g;
}

ExactResult search(const MergeTree& t, const MergeTree& g, bool rooted_only, bool special,
                   const OracleLimits& lim) {
  check_cap(t, g, lim);
  Enumerator en(t, g, lim);
  NormEvaluator eval(t, g);
  ExactResult best;
  best.value = INFINITY;
  auto done = [&] {
    if (special && !special_partners(t, g, en.pt(), en.pg())) return;
    double c = eval.norm(en.pt(), en.pg());
    if (c > best.value + kTau) return;
    PairSet p = sorted(en.stack());
    if (c < best.value - kTau || p < best.witness) {
      best.value = c;
      best.witness = std::move(p);
    }
    en.bound = best.value + kTau;
  };
  if (rooted_only) {
    en.rooted(t.root(), g.root(), done);
  } else {
    for (Vertex x = 0; x < t.size(); ++x)
      for (Vertex y = 0; y < g.size(); ++y) en.rooted(x, y, done);
  }
  best.visited = en.visited;
  return best;
}

}  // namespace

CouplingFamily enumerate_couplings(const MergeTree& t, const MergeTree& g, FamilyKind kind,
                                   const OracleLimits& limits) {
  check_cap(t, g, limits);
  Enumerator en(t, g, limits);
  NormEvaluator eval(t, g);
  CouplingFamily fam;
  fam.kind = kind;
  auto done = [&] {
    if (kind == FamilyKind::kRootedSpecial && !special_partners(t, g, en.pt(), en.pg())) return;
    fam.members.push_back({sorted(en.stack()), eval.norm(en.pt(), en.pg())});
  };
  if (kind == FamilyKind::kAll) {
    for (Vertex x = 0; x < t.size(); ++x)
      for (Vertex y = 0; y < g.size(); ++y) en.rooted(x, y, done);
  } else {
    en.rooted(t.root(), g.root(), done);
  }
  std::sort(fam.members.begin(), fam.members.end(),
            [](const FamilyMember& a, const FamilyMember& b) { return a.pairs < b.pairs; });
  fam.min_norm = INFINITY;
  for (const auto& m : fam.members) fam.min_norm = std::min(fam.min_norm, m.norm);
  for (std::size_t i = 0; i < fam.members.size(); ++i)
    if (fam.members[i].norm <= fam.min_norm + kTau) fam.minimizers.push_back(i);
  return fam;
}

ExactResult exact_interleaving(const MergeTree& t, const MergeTree& g, const OracleLimits& limits) {
  return search(t, g, false, false, limits);
}

ExactResult exact_rooted(const MergeTree& t, const MergeTree& g, bool special, const OracleLimits& limits) {
  return search(t, g, true, special, limits);
}

DecompositionReport verify_decomposition(const MergeTree& t, const MergeTree& g, const OracleLimits& limits) {
  check_cap(t, g, limits);
  DecompositionReport rep;
  rep.exact = exact_interleaving(t, g, limits).value;

  // Fixed rooted minimizers of every subtree pair, in original indices.
  const std::size_t nt = t.size(), ng = g.size();
  std::vector<PairSet> minimal(nt * ng), special(nt * ng);
  std::vector<bool> has_special(nt * ng, false);
  for (Vertex x = 0; x < nt; ++x) {
    std::vector<Vertex> mx;
    MergeTree tx = t.subtree(x, &mx);
    for (Vertex y = 0; y < ng; ++y) {
      std::vector<Vertex> my;
      MergeTree gy = g.subtree(y, &my);
      auto lift = [&](const PairSet& ps) {
        PairSet out;
        for (const auto& [a, b] : ps) out.push_back({mx[a], my[b]});
        return out;
      };
      minimal[x * ng + y] = lift(exact_rooted(tx, gy, false, limits).witness);
      ExactResult s = exact_rooted(tx, gy, true, limits);
      if (!s.witness.empty()) {
        has_special[x * ng + y] = true;
        special[x * ng + y] = lift(s.witness);
      }
    }
  }

  NormEvaluator eval(t, g);
  std::vector<Vertex> pt(nt, kNoVertex), pg(ng, kNoVertex);
  auto price = [&](const std::vector<Pair>& cstar, auto&& pick, bool restricted) {
    std::fill(pt.begin(), pt.end(), kNoVertex);
    std::fill(pg.begin(), pg.end(), kNoVertex);
    std::vector<Vertex> xs, ys;
    for (const auto& [x, y] : cstar) {
      xs.push_back(x);
      ys.push_back(y);
      for (const auto& [a, b] : pick(x, y)) {
        pt[a] = b;
        pg[b] = a;
      }
    }
    Vertex r = t.lca(xs), rr = g.lca(ys);
    pt[r] = rr;
    pg[rr] = r;
    return restricted ? eval.restricted_norm(pt, pg) : eval.norm(pt, pg);
  };

  rep.special_min_skip = rep.special_min_single = rep.low_bound = INFINITY;
  std::vector<Pair> all;
  for (Vertex x = 0; x < nt; ++x)
    for (Vertex y = 0; y < ng; ++y) all.push_back({x, y});
  std::vector<Pair> chosen;
  std::function<void(std::size_t)> walk = [&](std::size_t from) {
    for (std::size_t i = from; i < all.size(); ++i) {
      const auto [a, b] = all[i];
      bool ok = true;
      for (const auto& [c, d] : chosen)
        if (t.comparable(a, c) || g.comparable(b, d)) ok = false;
      if (!ok) continue;
      chosen.push_back(all[i]);
      ++rep.antichains;
      bool all_special = true;
      for (const auto& [x, y] : chosen)
        if (!has_special[x * ng + y]) all_special = false;
      double single = price(
          chosen,
          [&](Vertex x, Vertex y) {
            return has_special[x * ng + y] ? special[x * ng + y] : PairSet{{x, y}};
          },
          false);
      rep.special_min_single = std::min(rep.special_min_single, single);
      if (all_special && single < rep.special_min_skip - kTau) {
        rep.special_min_skip = single;
        rep.best_antichain = chosen;
      }
      double low = price(chosen, [&](Vertex x, Vertex y) { return minimal[x * ng + y]; }, true);
      rep.low_bound = std::min(rep.low_bound, low);
      walk(i + 1);
      chosen.pop_back();
    }
  };
  walk(0);
  return rep;
}

}  // namespace mti
