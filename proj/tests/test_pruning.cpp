#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/pruning.hpp"
#include "mti/random.hpp"

using namespace mti;

namespace {

double median_breakpoint(const MergeTree& t) {
  auto b = pruning_breakpoints(t);
  return b[b.size() / 2];
}

}  // namespace

TEST_CASE("prune the caterpillar") {
  auto t = fx::caterpillar_q09();
  auto r = prune(t, 0.2);
  CHECK(r.tree.size() == 3);
  CHECK(r.tree.parent(r.tree.at("p")) == r.tree.at("r"));
  CHECK(r.tree.parent(r.tree.at("u")) == r.tree.at("r"));
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].leaf == "q");
  CHECK(r.log[0].gap == doctest::Approx(0.1));
  CHECK(r.log[0].father == "s");
  CHECK_FALSE(r.log[0].root_promoted);
  CHECK_FALSE(r.degenerate);
  auto rep = check_pruning_lemma(t, r);
  CHECK(rep.pass());
  CHECK(rep.norm == doctest::Approx(0.05));
}

TEST_CASE("small eps leaves the tree unchanged") {
  auto t = fx::caterpillar_q09();
  auto r = prune(t, 0.05);
  CHECK(r.tree.size() == t.size());
  CHECK(r.log.empty());
  auto rep = check_pruning_lemma(t, r);
  CHECK(rep.pass());
  CHECK(rep.norm == 0);
  CHECK_THROWS_AS(prune(t, 0), std::invalid_argument);
}

TEST_CASE("T_A collapses to its lowest leaf") {
  auto t = fx::t_a();
  auto r = prune(t, 3);
  CHECK(r.degenerate);
  REQUIRE(r.tree.size() == 1);
  CHECK(r.tree.id(0) == "a");
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].leaf == "b");
  CHECK(r.log[0].root_promoted);
  auto rep = check_pruning_lemma(t, r);
  CHECK(rep.pass());
  CHECK(rep.norm <= 1.5);
}

TEST_CASE("leaf budget") {
  auto ta = prune_to_leaf_budget(fx::t_a(), 2);
  CHECK(ta.eps == 0);
  CHECK(ta.result.tree.size() == 3);

  auto t = fx::caterpillar_q09();
  auto two = prune_to_leaf_budget(t, 2);
  CHECK(two.eps > 0.1);
  CHECK(two.eps < 0.1 + 1e-6);
  CHECK(two.result.tree.leaves().size() == 2);

  auto one = prune_to_leaf_budget(t, 1);
  CHECK(one.result.degenerate);
  CHECK(one.result.tree.id(0) == "p");
  CHECK(prune(t, one.eps - 1e-6).tree.leaves().size() > 1);
  CHECK_THROWS_AS(prune_to_leaf_budget(t, 0), std::invalid_argument);
}

TEST_CASE("lemma, idempotence and monotonicity on random trees") {
  Rng rng(5);
  for (int rep = 0; rep < 40; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 9);
    auto bps = pruning_breakpoints(t);
    std::vector<double> levels{bps.front() * 0.5, median_breakpoint(t), bps.back() * 1.01};
    std::size_t prev = t.leaves().size() + 1;
    for (double eps : levels) {
      auto r = prune(t, eps);
      auto lem = check_pruning_lemma(t, r);
      CHECK(lem.pass());
      for (const auto& f : lem.failures) MESSAGE(f);
      auto again = prune(r.tree, eps);
      CHECK(again.log.empty());
      CHECK(r.tree.leaves().size() <= prev);
      prev = r.tree.leaves().size();
    }
  }
}

TEST_CASE("pruning bound against the oracle") {
  Rng rng(8);
  for (int rep = 0; rep < 12; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 3), g = random_merge_tree(rng, 2 + (rep / 3) % 3);
    double eps = std::max(median_breakpoint(t), median_breakpoint(g));
    auto pt = prune(t, eps), pg = prune(g, eps);
    double full = exact_interleaving(t, g).value;
    double pruned = exact_interleaving(pt.tree, pg.tree).value;
    CHECK(full <= std::max(pruned, eps / 2) + 1e-9);
  }
}
