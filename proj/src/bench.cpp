#include "mti/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mti/bounds.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/random.hpp"

namespace mti {

std::optional<double> BenchRow::gap() const {
  if (!d_l || !d_u) return std::nullopt;
  return *d_u - *d_l;
}

std::optional<double> BenchRow::rel_err() const {
  if (!d_lab || !d_u || !(*d_u > kTau)) return std::nullopt;
  return (*d_lab - *d_u) / *d_u;
}

void validate(const BenchConfig& cfg) {
  if (cfg.n_min < 2) throw std::invalid_argument("bench needs n_min >= 2");
  if (cfg.n_max < cfg.n_min) throw std::invalid_argument("bench needs n_max >= n_min");
  if (cfg.reps < 1) throw std::invalid_argument("bench needs reps >= 1");
  if (cfg.budget == 1) throw std::invalid_argument("bench budget must be 0 or at least 2");
}

std::map<std::pair<std::size_t, std::size_t>, double> read_dlab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::map<std::pair<std::size_t, std::size_t>, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
    std::size_t n = 0, rep = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf", &n, &rep, &v) != 3)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected n,rep,d_lab");
    out[{n, rep}] = v;
  }
  return out;
}

BenchResult run_benchmark(const BenchConfig& cfg) {
  validate(cfg);
  std::map<std::pair<std::size_t, std::size_t>, double> dlab;
  if (!cfg.dlab_path.empty()) dlab = read_dlab(cfg.dlab_path);
  BenchResult res;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n)
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      BenchRow row;
      row.n = n;
      row.rep = rep;
      if (auto it = dlab.find({n, rep}); it != dlab.end()) row.d_lab = it->second;
      try {
        Rng rng(substream_seed(cfg.seed, n, rep));
        CloudPair cp = generate_point_cloud_pair(n, rng);
        MergeTree t = cloud_tree(cp.first), g = cloud_tree(cp.second);
        if (cfg.budget != 0 && n > cfg.budget) {
          DOptResult d = d_opt(t, g, cfg.budget);
          row.d_u = d.value;
          row.pruned = true;
          row.ms_upper = d.bounds.ms_upper;
        } else {
          BoundsResult b = interleaving_bounds(t, g);
          row.d_l = b.d_lower;
          row.d_u = b.d_upper;
          row.ms_lower = b.ms_lower;
          row.ms_upper = b.ms_upper;
        }
        if (cfg.oracle_check && n <= 5) {
          row.exact = exact_interleaving(t, g).value;
          if ((row.d_l && *row.d_l > *row.exact + kTau) || *row.exact > *row.d_u + kTau) ++res.oracle_violations;
        }
      } catch (const std::exception& e) {
        res.failures.push_back("n=" + std::to_string(n) + " rep=" + std::to_string(rep) + ": " + e.what());
      }
      res.rows.push_back(std::move(row));
    }
  return res;
}

Quartiles quartiles(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("quartiles of an empty sample");
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    double pos = p * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

std::vector<SizeSummary> summarize(const std::vector<BenchRow>& rows) {
  std::map<std::size_t, std::vector<const BenchRow*>> by_n;
  for (const auto& r : rows) by_n[r.n].push_back(&r);
  std::vector<SizeSummary> out;
  for (const auto& [n, rs] : by_n) {
    SizeSummary s;
    s.n = n;
    s.rows = rs.size();
    std::vector<double> gaps, rels;
    for (const BenchRow* r : rs) {
      if (auto gp = r->gap()) {
        gaps.push_back(*gp);
        if (*gp <= kTau) ++s.zero_gap;
      }
      if (auto re = r->rel_err()) rels.push_back(*re);
    }
    if (!gaps.empty()) s.gap = quartiles(gaps);
    if (!rels.empty()) s.rel_err = quartiles(rels);
    out.push_back(s);
  }
  return out;
}

namespace {

std::string fmt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string fmt_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const BenchConfig& cfg, const BenchResult& res) {
  out << "# schema=1 seed=" << cfg.seed << " n_min=" << cfg.n_min << " n_max=" << cfg.n_max << " reps=" << cfg.reps
      << " budget=" << cfg.budget << " rng=mt19937_64/splitmix64 sigma=N(3,1)>0.05 perturb=1e-9*span\n";
  out << "n,rep,d_l,d_u,gap,d_lab,rel_err,ms_lower,ms_upper\n";
  for (const auto& r : res.rows) {
    out << r.n << ',' << r.rep << ',' << fmt(r.d_l) << ',' << fmt(r.d_u) << ',' << fmt(r.gap()) << ',' << fmt(r.d_lab)
        << ',' << fmt(r.rel_err()) << ',';
    if (cfg.timings) out << (r.d_l ? fmt_ms(r.ms_lower) : "") << ',' << (r.d_u ? fmt_ms(r.ms_upper) : "");
    else out << ',';
    out << '\n';
  }
}

void write_summary(std::ostream& out, const std::vector<SizeSummary>& s) {
  auto q = [](const std::optional<Quartiles>& v) -> std::string {
    if (!v) return "-";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4g [%.4g, %.4g]", v->median, v->q1, v->q3);
    return buf;
  };
  out << "n  rows  zero_gap  gap median [q1, q3]  rel_err median [q1, q3]\n";
  for (const auto& r : s)
    out << r.n << "  " << r.rows << "  " << r.zero_gap << "  " << q(r.gap) << "  " << q(r.rel_err) << '\n';
}

}  // namespace mti
