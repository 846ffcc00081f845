// Acceptance run: one PASS/FAIL line per criterion 1-10. Failures are
// reported with their counts; nothing is relaxed to turn a line green.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mti/bench.hpp"
#include "mti/bounds.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/induced_map.hpp"
#include "mti/pruning.hpp"
#include "mti/random.hpp"

using namespace mti;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::pair<MergeTree, MergeTree> cloud_pair(std::uint64_t seed, std::size_t n, std::size_t rep) {
  Rng rng(substream_seed(seed, n, rep));
  CloudPair cp = generate_point_cloud_pair(n, rng);
  return {cloud_tree(cp.first), cloud_tree(cp.second)};
}

std::vector<MetricPoint> vertex_images(const InducedMap& m) {
  std::vector<MetricPoint> out;
  for (Vertex v = 0; v < m.source().size(); ++v) out.push_back(m.eval_vertex(v));
  return out;
}

double median_breakpoint(const MergeTree& t) {
  auto b = pruning_breakpoints(t);
  return b[b.size() / 2];
}

Outcome oracle_sandwich() {
  std::size_t pairs = 0, bad = 0;
  for (std::size_t rep = 0; rep < 50; ++rep)
    for (std::size_t n = 2; n <= 5; ++n) {
      auto [t, g] = cloud_pair(101, n, rep);
      auto b = interleaving_bounds(t, g);
      double ex = exact_interleaving(t, g).value;
      ++pairs;
      if (b.d_lower - kTau > ex || ex > b.d_upper + kTau) ++bad;
    }
  return {bad == 0, fmt("%zu pairs, 2-5 leaves, %zu outside [d_l, d_u]", pairs, bad)};
}

Outcome gap_rate() {
  std::size_t pairs = 0, zero = 0;
  for (std::size_t rep = 0; rep < 15; ++rep)
    for (std::size_t n = 2; n <= 8; ++n) {
      auto [t, g] = cloud_pair(202, n, rep);
      auto b = interleaving_bounds(t, g);
      ++pairs;
      if (b.d_upper - b.d_lower <= kTau) ++zero;
    }
  double rate = static_cast<double>(zero) / static_cast<double>(pairs);
  return {rate >= 0.8, fmt("%zu/%zu pairs with zero gap (%.1f%%, need >= 80%%)", zero, pairs, 100 * rate)};
}

Outcome exact_fixtures() {
  auto ta = fx::t_a(), ga = fx::g_a();
  double self = exact_interleaving(ta, ta).value, ag = exact_interleaving(ta, ga).value;
  auto bs = interleaving_bounds(ta, ta), bg = interleaving_bounds(ta, ga);
  auto near = [](double a, double b) { return std::abs(a - b) <= kTau; };
  bool ok = near(self, 0) && near(ag, 1) && near(bs.d_lower, 0) && near(bs.d_upper, 0) && near(bg.d_lower, 1) &&
            near(bg.d_upper, 1);
  return {ok, fmt("d_I(T_A,T_A)=%g d_I(T_A,G_A)=%g bounds [%g,%g] and [%g,%g]", self, ag, bs.d_lower, bs.d_upper,
                  bg.d_lower, bg.d_upper)};
}

Outcome decomposition() {
  Rng rng(404);
  std::size_t bad = 0;
  const std::size_t pairs = 60;
  for (std::size_t rep = 0; rep < pairs; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 3), g = random_merge_tree(rng, 2 + (rep / 3) % 3);
    auto d = verify_decomposition(t, g);
    if (!d.equal_skip() || !d.low_ok()) ++bad;
  }
  return {bad == 0, fmt("%zu pairs with <= 4 leaves, %zu mismatches", pairs, bad)};
}

// Criteria 5 and 6 share one sweep.
struct MapSweep {
  std::size_t pairs = 0, couplings = 0, map_failures = 0, trip_failures = 0;
  double worst_excess = 0.0;
};

MapSweep map_sweep() {
  MapSweep s;
  Rng rng(505);
  for (std::size_t rep = 0; rep < 24; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 3), g = random_merge_tree(rng, 2 + (rep / 3) % 3);
    ++s.pairs;
    auto fam = enumerate_couplings(t, g, FamilyKind::kAll);
    for (const auto& mem : fam.members) {
      ++s.couplings;
      auto c = validate_coupling(t, g, mem.pairs);
      if (!check_eps_good(c, mem.norm, 3).pass()) ++s.map_failures;
      auto m = InducedMap::shifted(c, mem.norm);
      try {
        double back = coupling_context(extract_coupling(t, g, vertex_images(m), mem.norm)).norm;
        if (back > mem.norm + kTau) {
          ++s.trip_failures;
          s.worst_excess = std::max(s.worst_excess, back - mem.norm);
        }
      } catch (const std::exception&) {
        ++s.trip_failures;
      }
    }
  }
  return s;
}

Outcome pruning() {
  Rng rng(707);
  std::size_t trees = 0, lemma_bad = 0;
  for (std::size_t rep = 0; rep < 110; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 9);
    ++trees;
    auto bps = pruning_breakpoints(t);
    for (double eps : {bps.front() * 0.5, median_breakpoint(t), bps.back() * 1.01})
      if (!check_pruning_lemma(t, prune(t, eps)).pass()) ++lemma_bad;
  }
  std::size_t pairs = 0, prop_bad = 0;
  for (std::size_t rep = 0; rep < 36; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 4), g = random_merge_tree(rng, 2 + (rep / 4) % 4);
    double eps = std::max(median_breakpoint(t), median_breakpoint(g));
    double full = exact_interleaving(t, g).value;
    double pruned = exact_interleaving(prune(t, eps).tree, prune(g, eps).tree).value;
    ++pairs;
    if (full > std::max(pruned, eps / 2) + kTau) ++prop_bad;
  }
  return {lemma_bad == 0 && prop_bad == 0,
          fmt("lemma: %zu trees x 3 levels, %zu failures; inequality: %zu pairs, %zu failures", trees, lemma_bad, pairs,
              prop_bad)};
}

Outcome injection() {
  Rng rng(808);
  std::size_t bad = 0;
  double worst = 0.0;
  const std::size_t runs = 20;
  for (std::size_t rep = 0; rep < runs; ++rep) {
    auto t = random_merge_tree(rng, 3 + rep % 4), g = random_merge_tree(rng, 3 + (rep / 4) % 4);
    BoundsOptions opt{Penalty::kRoot, false, true, std::nullopt};
    double base = interleaving_bounds(t, g, opt).d_upper;
    // Even runs hit the root pair, which always feeds d_u; odd runs hit a random cell.
    Vertex x = t.root(), y = g.root();
    if (rep % 2 == 1) {
      x = static_cast<Vertex>(rng.index(t.size()));
      y = static_cast<Vertex>(rng.index(g.size()));
    }
    opt.inject = Injection{x, y, rng.uniform(0.01, 1.0)};
    double hit = interleaving_bounds(t, g, opt).d_upper;
    double change = std::abs(hit - base);
    worst = std::max(worst, change / opt.inject->amount);
    if (change > opt.inject->amount + kTau) ++bad;
  }
  return {bad == 0, fmt("%zu injections, %zu changed d_u by more than e (max ratio %.3f)", runs, bad, worst)};
}

Outcome performance() {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  auto [t, g] = cloud_pair(909, 15, 0);
  auto b = interleaving_bounds(t, g);
  double s15 = std::chrono::duration<double>(clock::now() - t0).count();
  double worst100 = 0.0;
  bool finite = std::isfinite(b.d_upper) && std::isfinite(b.d_lower);
  for (std::size_t n : {100, 101, 102}) {
    auto t1 = clock::now();
    auto [a, c] = cloud_pair(909, n, 0);
    auto d = d_opt(a, c, 15);
    finite = finite && std::isfinite(d.value);
    worst100 = std::max(worst100, std::chrono::duration<double>(clock::now() - t1).count());
  }
  return {finite && s15 <= 600 && worst100 <= 600,
          fmt("15 leaves: %.1f s; d_opt budget 15 on 100-102 leaves: worst %.1f s (limit 600 s each)", s15, worst100)};
}

Outcome determinism() {
  BenchConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 7;
  cfg.reps = 3;
  cfg.seed = 1010;
  auto csv = [&] {
    std::ostringstream os;
    write_csv(os, cfg, run_benchmark(cfg));
    return os.str();
  };
  bool same_csv = csv() == csv();
  auto [t, g] = cloud_pair(1010, 7, 0);
  auto a = interleaving_bounds(t, g), b = interleaving_bounds(t, g);
  bool same_tables = a.witness == b.witness;
  for (Vertex x = 0; x < t.size(); ++x)
    for (Vertex y = 0; y < g.size(); ++y)
      same_tables = same_tables && a.w_up.at(x, y) == b.w_up.at(x, y) && a.w_down.at(x, y) == b.w_down.at(x, y) &&
                    a.h.at(x, y) == b.h.at(x, y);
  return {same_csv && same_tables,
          fmt("bench CSV %s, bounds tables %s", same_csv ? "identical" : "differs", same_tables ? "identical" : "differ")};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2d %-28s %s  %s  [%.1f s]\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
  };
  report(1, "oracle sandwich", oracle_sandwich);
  report(2, "gap rate", gap_rate);
  report(3, "exact fixtures", exact_fixtures);
  report(4, "decomposition", decomposition);
  MapSweep sweep;
  report(5, "good-map suite", [&] {
    sweep = map_sweep();
    return Outcome{sweep.map_failures == 0, fmt("%zu couplings on %zu pairs, %zu maps not good", sweep.couplings,
                                                 sweep.pairs, sweep.map_failures)};
  });
  report(6, "round trip", [&] {
    return Outcome{sweep.couplings > 0 && sweep.trip_failures == 0,
                   fmt("%zu of %zu extracted couplings above eps (worst excess %.4f)", sweep.trip_failures,
                       sweep.couplings, sweep.worst_excess)};
  });
  report(7, "pruning", pruning);
  report(8, "error-injection independence", injection);
  report(9, "performance smoke", performance);
  report(10, "determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
