#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/induced_map.hpp"
#include "mti/random.hpp"

using namespace mti;

namespace {

Coupling full_a(const MergeTree& t, const MergeTree& g) {
  return validate_coupling_ids(t, g, {{"a", "a'"}, {"b", "b'"}, {"r", "r'"}});
}

Coupling identity(const MergeTree& t) {
  PairSet id;
  for (Vertex v = 0; v < t.size(); ++v) id.push_back({v, v});
  return validate_coupling(t, t, id);
}

std::vector<MetricPoint> vertex_images(const InducedMap& m) {
  std::vector<MetricPoint> out;
  for (Vertex v = 0; v < m.source().size(); ++v) out.push_back(m.eval_vertex(v));
  return out;
}

}  // namespace

TEST_CASE("structural shift") {
  auto t = fx::t_a();
  auto a = vertex_point(t, t.at("a")), b = vertex_point(t, t.at("b"));
  CHECK(structural_shift(t, a, 2) == vertex_point(t, t.at("r")));
  CHECK(structural_shift(t, b, 0) == b);
  auto up = structural_shift(t, b, 5);
  CHECK(up.carrier == t.root());
  CHECK(up.height == doctest::Approx(6));
  CHECK_THROWS_AS(structural_shift(t, a, -1), std::invalid_argument);
}

TEST_CASE("eval_alpha on the full star matching") {
  auto t = fx::t_a(), g = fx::g_a();
  auto c = full_a(t, g);
  auto m = InducedMap::shifted(c, 1.0);
  auto img = m.eval_vertex(t.at("a"));
  CHECK(img.carrier == g.at("a'"));
  CHECK(img.height == doctest::Approx(1));
  auto raw = InducedMap::raw(c);
  CHECK(raw.eval_vertex(t.at("r")) == vertex_point(g, g.at("r'")));
}

TEST_CASE("eval_alpha uses the two-step deletion image") {
  auto t = fx::t_b(), g = fx::g_b();
  auto c = validate_coupling_ids(t, g, {{"x", "x'"}});
  auto raw = InducedMap::raw(c);
  auto r = raw.eval_vertex(t.at("v"));
  CHECK(r.carrier == g.at("x'"));
  CHECK(r.height == doctest::Approx(0.75));
  auto m = InducedMap::shifted(c, 0.25);
  auto s = m.eval_vertex(t.at("v"));
  CHECK(s.carrier == g.at("x'"));
  CHECK(s.height == doctest::Approx(0.75));
}

TEST_CASE("shifted map guards eps") {
  auto t = fx::t_a(), g = fx::g_a();
  CHECK_THROWS_AS(InducedMap::shifted(full_a(t, g), 0.9), std::invalid_argument);
  CHECK_THROWS_AS(check_eps_good(full_a(t, g), 0.9), std::invalid_argument);
}

TEST_CASE("check_eps_good on fixtures") {
  auto t = fx::t_a(), g = fx::g_a();
  auto rep = check_eps_good(full_a(t, g), 1.0);
  CHECK(rep.pass());
  CHECK(rep.p1_residual <= 1e-12);
  auto id = check_eps_good(identity(t), 0.0);
  CHECK(id.pass());
  CHECK(id.p1_residual == 0);
  CHECK(id.i2_residual == 0);
}

TEST_CASE("extract_coupling round trips on fixtures") {
  auto t = fx::t_a(), g = fx::g_a();
  auto m = InducedMap::shifted(full_a(t, g), 1.0);
  auto c = extract_coupling(t, g, vertex_images(m), 1.0);
  CHECK(coupling_context(c).norm <= 1 + 1e-9);

  auto idm = InducedMap::shifted(identity(t), 0.0);
  auto ci = extract_coupling(t, t, vertex_images(idm), 0.0);
  CHECK(ci.pairs().size() == t.size());
  CHECK(coupling_context(ci).norm == 0);

  auto tb = fx::t_b(), gb = fx::g_b();
  auto mb = InducedMap::shifted(validate_coupling_ids(tb, gb, {{"x", "x'"}}), 0.25);
  auto cb = extract_coupling(tb, gb, vertex_images(mb), 0.25);
  CHECK(coupling_context(cb).norm <= 0.25 + 1e-9);
}

TEST_CASE("extract_coupling rejects broken images") {
  auto t = fx::t_a(), g = fx::g_a();
  auto m = InducedMap::shifted(full_a(t, g), 1.0);
  auto imgs = vertex_images(m);
  CHECK_THROWS_AS(extract_coupling(t, g, imgs, 1.5), ValidationError);
  std::swap(imgs[t.at("a")], imgs[t.at("r")]);
  CHECK_THROWS_AS(extract_coupling(t, g, imgs, 1.0), ValidationError);
}

TEST_CASE("shifted images are monotone and maps are good for every coupling") {
  Rng rng(99);
  for (int rep = 0; rep < 8; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 3), g = random_merge_tree(rng, 2 + (rep + 1) % 3);
    auto fam = enumerate_couplings(t, g, FamilyKind::kAll);
    for (const auto& mem : fam.members) {
      auto c = validate_coupling(t, g, mem.pairs);
      auto m = InducedMap::shifted(c, mem.norm);
      for (Vertex x = 0; x < t.size(); ++x)
        for (Vertex y = 0; y < t.size(); ++y)
          if (t.less(x, y)) CHECK(point_leq(g, m.eval_vertex(x), m.eval_vertex(y)));
      CHECK(check_eps_good(c, mem.norm).pass());
    }
  }
}

TEST_CASE("extraction keeps couples, multi-lambda and halving costs within eps") {
  Rng rng(99);
  for (int rep = 0; rep < 8; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 3), g = random_merge_tree(rng, 2 + (rep + 1) % 3);
    auto fam = enumerate_couplings(t, g, FamilyKind::kAll);
    for (const auto& mem : fam.members) {
      auto m = InducedMap::shifted(validate_coupling(t, g, mem.pairs), mem.norm);
      auto ctx = coupling_context(extract_coupling(t, g, vertex_images(m), mem.norm));
      auto side = [&](const MergeTree& x, const SideContext& s) {
        for (Vertex v = 0; v < x.size(); ++v) {
          if (s.cost_case[v] == CostCase::kDeleteEta)
            CHECK(0.5 * (x.height(s.phi[v]) - x.height(v)) <= mem.norm + 1e-9);
          else
            CHECK(s.cost[v] <= mem.norm + 1e-9);
        }
      };
      side(t, ctx.t);
      side(g, ctx.g);
    }
  }
}

TEST_CASE("extraction can exceed eps through the eta term of a dropped leaf") {
  // b's sibling a is dropped because c maps below it; a is then deleted
  // under s, whose only coupled vertex b sits far above a in G.
  auto t = fx::tree({{"a", 0.55, "s"}, {"b", 0.83, "s"}, {"c", 0.54, "r"}, {"s", 1.34, "r"}, {"r", 1.69, {}}});
  auto g = fx::tree({{"a'", 0.87, "k"}, {"b'", 0.99, "r'"}, {"c'", 0.82, "k"}, {"d'", 0.28, "k"}, {"k", 1.22, "r'"},
                     {"r'", 1.65, {}}});
  auto c = validate_coupling_ids(t, g, {{"a", "b'"}, {"b", "k"}, {"s", "r'"}});
  double eps = coupling_context(c).norm;
  REQUIRE(check_eps_good(c, eps).pass());
  auto back = coupling_context(extract_coupling(t, g, vertex_images(InducedMap::shifted(c, eps)), eps));
  Vertex a = t.at("a");
  CHECK(back.coupling.partner_of_t(a) == kNoVertex);
  CHECK(back.t.cost_case[a] == CostCase::kDeleteEta);
  CHECK(back.t.cost[a] > eps + 0.05);
  CHECK(back.norm > eps + 0.05);
}
