#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "mti/point_cloud.hpp"
#include "mti/random.hpp"

using namespace mti;

TEST_CASE("validate_tree accepts a minimal tree") {
  auto t = fx::t_a();
  CHECK(t.size() == 3);
  CHECK(t.id(t.root()) == "r");
  CHECK(t.leaves().size() == 2);
  CHECK(t.generic());
}

TEST_CASE("validate_tree rejects a decreasing edge") {
  try {
    fx::tree({{"a", 2, "r"}, {"r", 1, {}}});
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("non-increasing height on edge (a,r)") != std::string::npos);
    CHECK(e.vertices() == std::vector<std::string>{"a", "r"});
  }
}

TEST_CASE("validate_tree strict mode rejects ties") {
  std::vector<VertexRecord> recs{{"a", 0, "r"}, {"b", 0, "r"}, {"r", 1, {}}};
  CHECK_NOTHROW(MergeTree::from_records(recs));
  try {
    MergeTree::from_records(recs, Strictness::kStrict);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("duplicate heights {a,b}") != std::string::npos);
  }
}

TEST_CASE("validate_tree reports structural errors") {
  CHECK_THROWS_AS(fx::tree({{"a", 0, "b"}, {"b", 1, "a"}}), ValidationError);
  CHECK_THROWS_AS(fx::tree({{"a", 0, {}}, {"b", 1, {}}}), ValidationError);
  CHECK_THROWS_AS(fx::tree({{"a", 0, "zz"}, {"r", 1, {}}}), ValidationError);
  CHECK_THROWS_AS(fx::tree({}), ValidationError);
  CHECK_THROWS_AS(MergeTree::from_records({{"a", 0, "r"}, {"r", 1, {}}}, Strictness::kStrict), ValidationError);
}

TEST_CASE("lca queries") {
  auto t = fx::t_a();
  std::vector<Vertex> ab{t.at("a"), t.at("b")};
  CHECK(t.lca(ab) == t.at("r"));
  std::vector<Vertex> a{t.at("a")};
  CHECK(t.lca(a) == t.at("a"));
  auto c = fx::caterpillar();
  std::vector<Vertex> pu{c.at("p"), c.at("u")};
  CHECK(c.lca(pu) == c.at("r"));
  CHECK_THROWS_AS(t.at("nope"), ValidationError);
}

TEST_CASE("lca is associative under union") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 7);
    for (int k = 0; k < 10; ++k) {
      std::vector<Vertex> a{rng.index(t.size()), rng.index(t.size())};
      std::vector<Vertex> b{rng.index(t.size()), rng.index(t.size()), rng.index(t.size())};
      std::vector<Vertex> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      std::vector<Vertex> pair{t.lca(a), t.lca(b)};
      CHECK(t.lca(ab) == t.lca(pair));
    }
  }
}

TEST_CASE("path distance") {
  auto t = fx::t_a();
  auto a = vertex_point(t, t.at("a")), b = vertex_point(t, t.at("b"));
  CHECK(path_distance(t, a, b) == doctest::Approx(3));
  CHECK(path_distance(t, a, a) == 0);
  CHECK(path_distance(t, a, make_point(t, t.at("a"), 1.0)) == doctest::Approx(1));
  CHECK_THROWS_AS(path_distance(t, MetricPoint{99, 0}, a), std::invalid_argument);
}

TEST_CASE("path distance is a metric on sampled points") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    auto t = random_merge_tree(rng, 5);
    std::vector<MetricPoint> pts;
    for (Vertex v = 0; v < t.size(); ++v) {
      pts.push_back(vertex_point(t, v));
      if (t.parent(v) != kNoVertex) pts.push_back(make_point(t, v, 0.5 * (t.height(v) + t.height(t.parent(v)))));
    }
    pts.push_back({t.root(), t.max_height() + 1});
    for (const auto& p : pts)
      for (const auto& q : pts) {
        double d = path_distance(t, p, q);
        CHECK(d >= 0);
        CHECK(d == doctest::Approx(path_distance(t, q, p)));
        CHECK((d == 0) == same_point(t, p, q));
        for (const auto& r : pts) CHECK(path_distance(t, p, r) <= d + path_distance(t, q, r) + 1e-9);
      }
  }
}

TEST_CASE("single linkage on three points") {
  auto c = PointCloud::from_points({{0, 0}, {0, 1}, {0, 3}});
  auto r = single_linkage_tree(c);
  const auto& t = r.tree;
  CHECK_FALSE(r.degenerate);
  CHECK(t.size() == 5);
  CHECK_FALSE(t.generic());
  for (Vertex l : t.leaves()) CHECK(t.height(l) == 0);
  CHECK(t.max_height() == doctest::Approx(2));
  Vertex m0 = t.at("m0");
  CHECK(t.height(m0) == doctest::Approx(1));
  CHECK(t.parent(t.at("p0")) == m0);
  CHECK(t.parent(t.at("p1")) == m0);
  CHECK(t.parent(t.at("p2")) == t.root());
}

TEST_CASE("single linkage edge cases") {
  auto same = single_linkage_tree(PointCloud::from_points({{1, 1}, {1, 1}}));
  CHECK(same.degenerate);
  CHECK(same.tree.size() == 1);
  auto two = single_linkage_tree(PointCloud::from_points({{0, 0}, {3, 4}})).tree;
  CHECK(two.size() == 3);
  CHECK(two.max_height() == doctest::Approx(5));
  CHECK_THROWS_AS(single_linkage_tree(PointCloud::from_points({{0, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud::from_points({{0, NAN}}), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud::from_matrix({{0, 1}, {2, 0}}), std::invalid_argument);
}

TEST_CASE("single linkage has 2n-1 vertices and monotone paths") {
  Rng rng(3);
  for (std::size_t n = 2; n < 12; ++n) {
    auto pair = generate_point_cloud_pair(n, rng);
    auto t = single_linkage_tree(pair.first).tree;
    CHECK(t.size() == 2 * n - 1);
    for (Vertex v = 0; v < t.size(); ++v)
      if (t.parent(v) != kNoVertex) CHECK(t.height(v) <= t.height(t.parent(v)));
  }
}

TEST_CASE("perturb_to_generic") {
  auto t = fx::tree({{"a", 0, "r"}, {"b", 0, "r"}, {"r", 1, {}}});
  auto p = perturb_to_generic(t, 1e-6);
  CHECK(p.generic());
  CHECK(p.height(p.at("a")) == 0);
  CHECK(p.height(p.at("b")) == doctest::Approx(2.5e-7).epsilon(1e-12));
  CHECK(p.height(p.at("r")) == 1);
  auto same = perturb_to_generic(fx::t_a(), 1e-6);
  for (Vertex v = 0; v < same.size(); ++v) CHECK(same.height(v) == fx::t_a().height(v));
  auto tight = fx::tree({{"a", 0, "r"}, {"b", 0, "r"}, {"c", 0, "r"}, {"r", 1e-9, {}}});
  CHECK_THROWS_AS(perturb_to_generic(tight, 1e-6), ValidationError);
}

TEST_CASE("perturbed single-linkage trees pass strict validation") {
  Rng rng(8);
  for (std::size_t n = 2; n < 10; ++n) {
    auto t = cloud_tree(generate_point_cloud_pair(n, rng).first);
    CHECK_NOTHROW(MergeTree::from_records(t.records(), Strictness::kStrict));
  }
}

TEST_CASE("len and lvl") {
  auto t = fx::t_a();
  auto ll = len_lvl(t);
  CHECK(ll.len[t.at("r")] == 1);
  CHECK(ll.len[t.at("a")] == 2);
  CHECK(ll.tree_len == 2);
  CHECK(ll.lvl[t.at("a")] == 0);
  CHECK(ll.lvl[t.at("r")] == 1);
  auto single = len_lvl(fx::tree({{"z", 0, {}}}));
  CHECK(single.len[0] == 1);
  CHECK(single.lvl[0] == 0);
  auto c = fx::caterpillar();
  auto lc = len_lvl(c);
  CHECK(lc.len[c.at("p")] == 3);
  CHECK(lc.lvl[c.at("p")] == 0);
  CHECK(lc.lvl[c.at("r")] == 2);
}

TEST_CASE("lvl strictly decreases into subtrees") {
  Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    auto t = random_merge_tree(rng, 2 + rep % 9);
    auto ll = len_lvl(t);
    for (Vertex x = 0; x < t.size(); ++x)
      for (Vertex v : t.subtree_vertices(x))
        if (v != x) CHECK(ll.lvl[x] > ll.lvl[v]);
  }
}

TEST_CASE("subtree extraction keeps heights and order") {
  auto c = fx::caterpillar();
  std::vector<Vertex> back;
  auto s = c.subtree(c.at("s"), &back);
  CHECK(s.size() == 3);
  CHECK(c.id(back[s.root()]) == "s");
  for (Vertex v = 0; v < s.size(); ++v) CHECK(s.height(v) == c.height(back[v]));
}
