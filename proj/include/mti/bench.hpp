#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mti {

struct BenchConfig {
  std::size_t n_min = 2, n_max = 8;
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  /// Sizes above the budget go through d_opt (upper only); 0 disables.
  std::size_t budget = 15;
  std::string dlab_path;  // optional CSV with columns n,rep,d_lab
  bool timings = false;
  bool oracle_check = false;  // compare with the exact oracle for n <= 5
};

struct BenchRow {
  std::size_t n = 0, rep = 0;
  std::optional<double> d_l, d_u, d_lab, exact;
  double ms_lower = 0.0, ms_upper = 0.0;
  bool pruned = false;

  std::optional<double> gap() const;
  /// (d_lab - d_u) / d_u, defined when d_u > tau.
  std::optional<double> rel_err() const;
};

struct Quartiles {
  double q1 = 0.0, median = 0.0, q3 = 0.0;
};

struct SizeSummary {
  std::size_t n = 0, rows = 0, zero_gap = 0;
  std::optional<Quartiles> gap, rel_err;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<std::string> failures;  // one line per row that could not be computed
  std::size_t oracle_violations = 0;
};

void validate(const BenchConfig& cfg);
BenchResult run_benchmark(const BenchConfig& cfg);
/// d_lab values keyed by (n, rep).
std::map<std::pair<std::size_t, std::size_t>, double> read_dlab(const std::string& path);

Quartiles quartiles(std::vector<double> v);
std::vector<SizeSummary> summarize(const std::vector<BenchRow>& rows);

void write_csv(std::ostream& out, const BenchConfig& cfg, const BenchResult& res);
void write_summary(std::ostream& out, const std::vector<SizeSummary>& s);

}  // namespace mti
