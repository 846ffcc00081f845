#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/random.hpp"

using namespace mti;

TEST_CASE("enumerate all couplings of the star fixtures") {
  auto t = fx::t_a(), g = fx::g_a();
  auto fam = enumerate_couplings(t, g, FamilyKind::kAll);
  // Nine singletons plus the two full matchings.
  CHECK(fam.members.size() == 11);
  for (const auto& m : fam.members) CHECK(check_coupling(t, g, m.pairs).empty());
  PairSet full{{t.at("a"), g.at("a'")}, {t.at("b"), g.at("b'")}, {t.at("r"), g.at("r'")}};
  std::sort(full.begin(), full.end());
  CHECK(std::any_of(fam.members.begin(), fam.members.end(), [&](const auto& m) { return m.pairs == full; }));
  CHECK(std::is_sorted(fam.members.begin(), fam.members.end(),
                       [](const auto& a, const auto& b) { return a.pairs < b.pairs; }));
}

TEST_CASE("rooted families contain the root pair") {
  auto t = fx::t_a(), g = fx::g_a();
  auto fam = enumerate_couplings(t, g, FamilyKind::kRooted);
  CHECK_FALSE(fam.members.empty());
  for (const auto& m : fam.members)
    CHECK(std::find(m.pairs.begin(), m.pairs.end(), Pair{t.root(), g.root()}) != m.pairs.end());
  auto sp = enumerate_couplings(t, t, FamilyKind::kRootedSpecial);
  CHECK(sp.min_norm == 0);
  for (const auto& m : sp.members) CHECK(is_special(coupling_context(validate_coupling(t, t, m.pairs))));
}

TEST_CASE("exact interleaving on fixtures") {
  auto t = fx::t_a(), g = fx::g_a();
  CHECK(exact_interleaving(t, t).value == 0);
  auto r = exact_interleaving(t, g);
  CHECK(r.value == doctest::Approx(1));
  PairSet full{{t.at("a"), g.at("a'")}, {t.at("b"), g.at("b'")}, {t.at("r"), g.at("r'")}};
  std::sort(full.begin(), full.end());
  CHECK(coupling_context(validate_coupling(t, g, r.witness)).norm == doctest::Approx(1));
  auto tb = fx::t_b(), gb = fx::g_b();
  auto rb = exact_interleaving(tb, gb);
  CHECK(rb.value <= 0.25 + 1e-12);
  auto fam = enumerate_couplings(tb, gb, FamilyKind::kAll);
  CHECK(rb.value == doctest::Approx(fam.min_norm));
}

TEST_CASE("cap and timeout") {
  Rng rng(1);
  auto big = random_merge_tree(rng, 6), small = random_merge_tree(rng, 3);
  CHECK_THROWS_AS(exact_interleaving(big, small), CapExceeded);
  OracleLimits tight{6, 0.0};
  CHECK_THROWS_AS(exact_interleaving(big, big, tight), TimeoutError);
}

TEST_CASE("oracle agrees with full enumeration, symmetry and sandwich") {
  Rng rng(4);
  for (int rep = 0; rep < 15; ++rep) {
    auto t = random_merge_tree(rng, 1 + rep % 4), g = random_merge_tree(rng, 2 + rep % 3);
    auto all = enumerate_couplings(t, g, FamilyKind::kAll);
    auto ex = exact_interleaving(t, g);
    CHECK(ex.value == doctest::Approx(all.min_norm));
    CHECK(ex.witness == all.members[all.minimizers.front()].pairs);
    CHECK(exact_interleaving(g, t).value == doctest::Approx(ex.value));
    auto rooted = exact_rooted(t, g, false);
    auto special = exact_rooted(t, g, true);
    CHECK(rooted.value >= ex.value - 1e-12);
    CHECK(special.value >= rooted.value - 1e-12);
  }
}

TEST_CASE("triangle inequality on small trees") {
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    auto a = random_merge_tree(rng, 2 + rep % 3), b = random_merge_tree(rng, 3), c = random_merge_tree(rng, 2);
    double ab = exact_interleaving(a, b).value, bc = exact_interleaving(b, c).value,
           ac = exact_interleaving(a, c).value;
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("decomposition on fixtures") {
  auto t = fx::t_a(), g = fx::g_a();
  auto self = verify_decomposition(t, t);
  CHECK(self.exact == 0);
  CHECK(self.equal_skip());
  CHECK(self.low_ok());
  auto ag = verify_decomposition(t, g);
  CHECK(ag.exact == doctest::Approx(1));
  CHECK(ag.equal_skip());
  CHECK(ag.low_ok());
  auto b = verify_decomposition(fx::t_b(), fx::g_b());
  CHECK(b.equal_skip());
  CHECK(b.low_ok());
}

TEST_CASE("decomposition on random pairs") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 3), g = random_merge_tree(rng, 2 + (rep / 2) % 3);
    auto d = verify_decomposition(t, g);
    CHECK(d.low_ok());
    CHECK(d.equal_skip());
    CHECK(d.special_min_single >= d.exact - 1e-9);
  }
}
