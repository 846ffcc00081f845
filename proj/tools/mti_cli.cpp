// Command-line front end: validate, exact, bounds, cost, verify-map, prune,
// slink, bench. Exit codes: 0 ok, 2 validation, 3 cap/timeout, 4 assertion.

#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mti/bench.hpp"
#include "mti/bounds.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/induced_map.hpp"
#include "mti/json_io.hpp"
#include "mti/point_cloud.hpp"
#include "mti/pruning.hpp"

using namespace mti;

namespace {

struct Common {
  std::vector<std::string> trees;
  std::string out = "json";
  std::uint64_t seed = 1;
  double timeout_s = 60.0;
  std::size_t max_leaves = 0;
  std::string direction = "both";
  std::string penalty = "root";
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<MergeTree> load(const Common& c, std::size_t want) {
  if (c.trees.size() != want)
    throw UsageError("expected " + std::to_string(want) + " --tree argument(s), got " + std::to_string(c.trees.size()));
  std::vector<MergeTree> out;
  for (const auto& p : c.trees) out.push_back(read_tree(p));
  return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

void json_only(const Common& c, const char* cmd) {
  if (c.out != "json") throw UsageError(std::string(cmd) + " writes json only");
}

OracleLimits limits(const Common& c) {
  OracleLimits l;
  if (c.max_leaves) l.max_leaves = c.max_leaves;
  l.timeout_s = c.timeout_s;
  return l;
}

Penalty penalty_of(const Common& c) { return c.penalty == "father" ? Penalty::kFather : Penalty::kRoot; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interleaving distance between merge trees"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s) {
    s->add_option("-t,--tree", c.trees, "Tree JSON file (repeat for the second tree)");
    s->add_option("--out", c.out, "Output format")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--seed", c.seed, "Random seed");
    s->add_option("--timeout-s", c.timeout_s, "Wall-clock budget of the exact oracle");
    s->add_option("--max-leaves", c.max_leaves, "Leaf cap (exact) or leaf budget (bounds, prune)");
    s->add_option("--direction", c.direction, "Bounds direction")->check(CLI::IsMember({"up", "down", "both"}));
    s->add_option("--penalty", c.penalty, "Experimental u-penalty")->check(CLI::IsMember({"root", "father"}));
  };

  auto* validate_cmd = app.add_subcommand("validate", "Validate trees, and a coupling between two trees");
  common(validate_cmd);
  std::string coupling_path;
  validate_cmd->add_option("-c,--coupling", coupling_path, "Coupling JSON file");

  auto* exact_cmd = app.add_subcommand("exact", "Exact distance by enumeration (small trees)");
  common(exact_cmd);
  bool family = false, decomposition = false;
  exact_cmd->add_flag("--family", family, "Also report the family of all couplings");
  exact_cmd->add_flag("--decomposition", decomposition, "Also check the antichain decomposition");

  auto* bounds_cmd = app.add_subcommand("bounds", "Lower and upper bounds by the bottom-up algorithm");
  common(bounds_cmd);
  std::string dump_path;
  bounds_cmd->add_option("--dump-program", dump_path, "Write the root-pair program as JSON");

  auto* cost_cmd = app.add_subcommand("cost", "Cost of a coupling");
  common(cost_cmd);
  cost_cmd->add_option("-c,--coupling", coupling_path, "Coupling JSON file")->required();

  auto* map_cmd = app.add_subcommand("verify-map", "Check the induced eps-good map and the round trip");
  common(map_cmd);
  map_cmd->add_option("-c,--coupling", coupling_path, "Coupling JSON file")->required();
  std::optional<double> eps;
  int per_edge = 3;
  map_cmd->add_option("--eps", eps, "Shift (defaults to the coupling cost)");
  map_cmd->add_option("--per-edge", per_edge, "Interior samples per edge");

  auto* prune_cmd = app.add_subcommand("prune", "Prune short leaves");
  common(prune_cmd);
  std::optional<double> prune_eps;
  prune_cmd->add_option("--epsilon", prune_eps, "Pruning threshold");

  auto* slink_cmd = app.add_subcommand("slink", "Single-linkage tree of a point cloud CSV");
  common(slink_cmd);
  std::string points;
  bool keep_ties = false;
  slink_cmd->add_option("--points", points, "CSV with x,y rows or a distance matrix")->required();
  slink_cmd->add_flag("--keep-ties", keep_ties, "Do not perturb tied heights");

  auto* bench_cmd = app.add_subcommand("bench", "Point-cloud benchmark");
  common(bench_cmd);
  BenchConfig cfg;
  std::string output;
  bool summary = false;
  bench_cmd->add_option("--n-min", cfg.n_min, "Smallest leaf count");
  bench_cmd->add_option("--n-max", cfg.n_max, "Largest leaf count");
  bench_cmd->add_option("--reps", cfg.reps, "Replicates per size");
  bench_cmd->add_option("--budget", cfg.budget, "Sizes above go through d_opt; 0 disables");
  bench_cmd->add_option("--dlab", cfg.dlab_path, "CSV with n,rep,d_lab");
  bench_cmd->add_flag("--timings", cfg.timings, "Fill the ms columns");
  bench_cmd->add_flag("--oracle", cfg.oracle_check, "Cross-check rows with n <= 5 against the oracle");
  bench_cmd->add_flag("--summary", summary, "Print per-size statistics to stderr");
  bench_cmd->add_option("-o,--output", output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate_cmd) {
      json_only(c, "validate");
      if (c.trees.empty() || c.trees.size() > 2) throw UsageError("validate takes one or two --tree files");
      Json out{{"valid", true}};
      Json trees = Json::array();
      std::vector<MergeTree> ts;
      for (const auto& p : c.trees) {
        ts.push_back(read_tree(p));
        const MergeTree& t = ts.back();
        trees.push_back({{"file", p}, {"vertices", t.size()}, {"leaves", t.leaves().size()}, {"generic", t.generic()}});
      }
      out["trees"] = std::move(trees);
      if (!coupling_path.empty()) {
        if (ts.size() != 2) throw UsageError("a coupling needs two trees");
        auto pairs = read_pairs(coupling_path, ts[0], ts[1]);
        auto violations = check_coupling(ts[0], ts[1], pairs);
        Json v = Json::array();
        for (const auto& x : violations) v.push_back({{"condition", x.condition}, {"message", x.message}});
        out["coupling_valid"] = violations.empty();
        out["violations"] = std::move(v);
        emit(out);
        return violations.empty() ? 0 : 2;
      }
      emit(out);
    } else if (*exact_cmd) {
      json_only(c, "exact");
      auto ts = load(c, 2);
      auto lim = limits(c);
      Json out = exact_to_json(ts[0], ts[1], exact_interleaving(ts[0], ts[1], lim));
      if (family) out["family"] = family_to_json(ts[0], ts[1], enumerate_couplings(ts[0], ts[1], FamilyKind::kAll, lim));
      if (decomposition) out["decomposition"] = decomposition_to_json(ts[0], ts[1], verify_decomposition(ts[0], ts[1], lim));
      emit(out);
    } else if (*bounds_cmd) {
      auto ts = load(c, 2);
      BoundsOptions opt;
      opt.penalty = penalty_of(c);
      opt.lower = c.direction != "up";
      opt.upper = c.direction != "down";
      Json out;
      if (c.max_leaves && (ts[0].leaves().size() > c.max_leaves || ts[1].leaves().size() > c.max_leaves)) {
        if (c.direction == "down") throw UsageError("d_opt is an upper bound; use --direction up or both");
        auto d = d_opt(ts[0], ts[1], c.max_leaves, opt);
        out = Json{{"d_opt", d.value}, {"eps", d.eps}, {"pruned", bounds_to_json(d.pruned_t.tree, d.pruned_g.tree, d.bounds)}};
      } else {
        auto b = interleaving_bounds(ts[0], ts[1], opt);
        out = bounds_to_json(ts[0], ts[1], b);
        if (!opt.lower) out["lower"] = nullptr;
        if (!opt.upper) out["upper"] = nullptr;
        if (c.out == "csv") {
          std::cout << "lower,upper\n" << (opt.lower ? std::to_string(b.d_lower) : "") << ','
                    << (opt.upper ? std::to_string(b.d_upper) : "") << '\n';
        }
        if (!dump_path.empty()) {
          const MergeTree &t = ts[0], &g = ts[1];
          if (t.is_leaf(t.root()) || g.is_leaf(g.root())) throw UsageError("no program for a single-vertex tree");
          Direction dir = opt.upper ? Direction::kUp : Direction::kDown;
          auto table = bottom_up(t, g, {dir, opt.penalty, std::nullopt});
          auto p = linearize(build_program(t, g, t.root(), g.root(), table.w, dir, opt.penalty));
          std::ofstream f(dump_path);
          if (!f) throw UsageError("cannot write " + dump_path);
          f << program_to_json(explicit_program(p)).dump(2) << '\n';
        }
      }
      if (c.out == "json") emit(out);
    } else if (*cost_cmd) {
      json_only(c, "cost");
      auto ts = load(c, 2);
      auto cp = validate_coupling(ts[0], ts[1], read_pairs(coupling_path, ts[0], ts[1]));
      emit(cost_to_json(coupling_context(cp)));
    } else if (*map_cmd) {
      json_only(c, "verify-map");
      auto ts = load(c, 2);
      auto cp = validate_coupling(ts[0], ts[1], read_pairs(coupling_path, ts[0], ts[1]));
      double e = eps.value_or(coupling_context(cp).norm);
      Json out = good_map_to_json(check_eps_good(cp, e, per_edge));
      auto m = InducedMap::shifted(cp, e);
      std::vector<MetricPoint> images;
      for (Vertex v = 0; v < ts[0].size(); ++v) images.push_back(m.eval_vertex(v));
      auto back = extract_coupling(ts[0], ts[1], images, e);
      double back_norm = coupling_context(back).norm;
      out["round_trip"] = Json{{"pairs", pairs_to_json(ts[0], ts[1], back.pairs())["pairs"]},
                               {"norm", back_norm},
                               {"within_eps", back_norm <= e + kTau}};
      emit(out);
    } else if (*prune_cmd) {
      json_only(c, "prune");
      auto ts = load(c, 1);
      if (prune_eps.has_value() == (c.max_leaves != 0)) throw UsageError("prune takes exactly one of --epsilon, --max-leaves");
      if (prune_eps) {
        emit(prune_to_json(prune(ts[0], *prune_eps)));
      } else {
        auto b = prune_to_leaf_budget(ts[0], c.max_leaves);
        Json out = prune_to_json(b.result);
        out["eps"] = b.eps;
        emit(out);
      }
    } else if (*slink_cmd) {
      json_only(c, "slink");
      auto lr = single_linkage_tree(PointCloud::read_csv(points));
      MergeTree t = keep_ties ? lr.tree : perturb_to_generic(lr.tree, 1e-9 * std::max(lr.tree.height_span(), 1e-300));
      Json out = tree_to_json(t);
      out["collapsed_duplicates"] = lr.degenerate;
      emit(out);
    } else if (*bench_cmd) {
      cfg.seed = c.seed;
      auto res = run_benchmark(cfg);
      std::ofstream file;
      if (!output.empty()) {
        file.open(output);
        if (!file) throw UsageError("cannot write " + output);
      }
      std::ostream& os = output.empty() ? std::cout : file;
      // CSV unless json was asked for explicitly.
      if (bench_cmd->get_option("--out")->count() == 0 || c.out == "csv") {
        write_csv(os, cfg, res);
      } else {
        Json rows = Json::array();
        for (const auto& r : res.rows) {
          auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
          rows.push_back({{"n", r.n}, {"rep", r.rep}, {"d_l", opt(r.d_l)}, {"d_u", opt(r.d_u)}, {"gap", opt(r.gap())},
                          {"d_lab", opt(r.d_lab)}, {"rel_err", opt(r.rel_err())}, {"pruned", r.pruned}});
        }
        os << Json{{"seed", cfg.seed}, {"rows", std::move(rows)}, {"failures", res.failures}}.dump(2) << '\n';
      }
      if (summary) write_summary(std::cerr, summarize(res.rows));
      for (const auto& f : res.failures) std::cerr << "row failed: " << f << '\n';
      if (cfg.oracle_check && res.oracle_violations) {
        std::cerr << res.oracle_violations << " rows broke the oracle sandwich\n";
        return 4;
      }
    }
    return 0;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return 3;
  } catch (const TimeoutError& e) {
    std::cerr << "timeout: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    for (const auto& v : e.vertices()) std::cerr << "  vertex " << v << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}
