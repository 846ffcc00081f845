#include "mti/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mti {

namespace {

// NaN and infinities have no JSON form; they become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json side_to_json(const MergeTree& x, const SideContext& s) {
  Json out = Json::array();
  for (Vertex v = 0; v < x.size(); ++v) {
    Json e{{"id", x.id(v)}, {"class", to_string(s.cls[v])}, {"case", to_string(s.cost_case[v])}, {"cost", num(s.cost[v])}};
    Json lam = Json::array();
    for (Vertex l : s.lambda[v]) lam.push_back(x.id(l));
    e["lambda"] = std::move(lam);
    if (s.cls[v] == VertexClass::kDeleted && s.lambda[v].empty()) {
      e["phi"] = x.id(s.phi[v]);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path, {});
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what(), {});
  }
}

MergeTree tree_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array())
    throw ValidationError("tree JSON needs a \"nodes\" array", {});
  std::vector<VertexRecord> recs;
  for (const auto& n : j["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n["id"].is_string() || !n.contains("height") || !n["height"].is_number())
      throw ValidationError("each node needs a string \"id\" and a numeric \"height\"", {});
    VertexRecord r{n["id"].get<std::string>(), n["height"].get<double>(), std::nullopt};
    if (n.contains("parent") && !n["parent"].is_null()) {
      if (!n["parent"].is_string()) throw ValidationError("\"parent\" must be a string or null", {r.id});
      r.parent = n["parent"].get<std::string>();
    }
    recs.push_back(std::move(r));
  }
  bool generic = j.contains("generic") && j["generic"].is_boolean() && j["generic"].get<bool>();
  return MergeTree::from_records(std::move(recs), generic ? Strictness::kStrict : Strictness::kRelaxed);
}

MergeTree read_tree(const std::string& path) { return tree_from_json(read_json(path)); }

Json tree_to_json(const MergeTree& t) {
  Json nodes = Json::array();
  for (const auto& r : t.records()) {
    Json n{{"id", r.id}, {"height", r.height}};
    n["parent"] = r.parent ? Json(*r.parent) : Json(nullptr);
    nodes.push_back(std::move(n));
  }
  return Json{{"nodes", std::move(nodes)}, {"generic", t.generic()}};
}

PairSet pairs_from_json(const Json& j, const MergeTree& t, const MergeTree& g) {
  if (!j.is_object() || !j.contains("pairs") || !j["pairs"].is_array())
    throw ValidationError("coupling JSON needs a \"pairs\" array", {});
  PairSet out;
  for (const auto& p : j["pairs"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw ValidationError("each pair must be two vertex ids", {});
    out.push_back({t.at(p[0].get<std::string>()), g.at(p[1].get<std::string>())});
  }
  return out;
}

PairSet read_pairs(const std::string& path, const MergeTree& t, const MergeTree& g) {
  return pairs_from_json(read_json(path), t, g);
}

Json pairs_to_json(const MergeTree& t, const MergeTree& g, const PairSet& pairs) {
  Json out = Json::array();
  for (const auto& [x, y] : pairs) out.push_back({t.id(x), g.id(y)});
  return Json{{"pairs", std::move(out)}};
}

Json cost_to_json(const CouplingContext& ctx) {
  const Coupling& c = ctx.coupling;
  return Json{{"norm", ctx.norm},
              {"special", is_special(ctx)},
              {"pairs", pairs_to_json(c.t(), c.g(), c.pairs())["pairs"]},
              {"t", side_to_json(c.t(), ctx.t)},
              {"g", side_to_json(c.g(), ctx.g)}};
}

Json good_map_to_json(const GoodMapReport& r) {
  Json p2 = Json::array();
  for (const auto& [a, b] : r.p2_violations) p2.push_back({a, b});
  return Json{{"eps", r.eps},
              {"pass", r.pass()},
              {"p1_residual", r.p1_residual},
              {"continuity_violations", r.continuity_violations},
              {"p2_violations", std::move(p2)},
              {"p3_max_excess", num(r.p3_max_excess)},
              {"p3_witnesses", r.p3_witnesses},
              {"i2_residual", r.i2_residual},
              {"i2_violations", r.i2_violations},
              {"samples", r.samples}};
}

Json exact_to_json(const MergeTree& t, const MergeTree& g, const ExactResult& r) {
  return Json{{"value", num(r.value)}, {"witness", pairs_to_json(t, g, r.witness)}, {"visited", r.visited}};
}

Json family_to_json(const MergeTree& t, const MergeTree& g, const CouplingFamily& f) {
  Json mins = Json::array();
  for (std::size_t i : f.minimizers) mins.push_back(pairs_to_json(t, g, f.members[i].pairs)["pairs"]);
  return Json{{"size", f.members.size()}, {"min_norm", num(f.min_norm)}, {"minimizers", std::move(mins)}};
}

Json decomposition_to_json(const MergeTree& t, const MergeTree& g, const DecompositionReport& r) {
  return Json{{"exact", r.exact},
              {"special_min_skip", num(r.special_min_skip)},
              {"special_min_single", num(r.special_min_single)},
              {"low_bound", num(r.low_bound)},
              {"antichains", r.antichains},
              {"best_antichain", pairs_to_json(t, g, r.best_antichain)["pairs"]},
              {"pass", r.equal_skip() && r.low_ok()}};
}

Json prune_to_json(const PruneResult& r) {
  Json log = Json::array();
  for (const auto& s : r.log) {
    Json e{{"leaf", s.leaf}, {"gap", s.gap}};
    e["father"] = s.father.empty() ? Json(nullptr) : Json(s.father);
    e["root_promoted"] = s.root_promoted;
    log.push_back(std::move(e));
  }
  return Json{{"eps", r.eps}, {"degenerate", r.degenerate}, {"tree", tree_to_json(r.tree)}, {"removed", std::move(log)}};
}

Json bounds_to_json(const MergeTree& t, const MergeTree& g, const BoundsResult& r) {
  Json out{{"lower", num(r.d_lower)}, {"upper", num(r.d_upper)}};
  out["root_pair"] = r.upper_pair.first == kNoVertex ? Json(nullptr)
                                                     : Json::array({t.id(r.upper_pair.first), g.id(r.upper_pair.second)});
  out["lower_pair"] = r.lower_pair.first == kNoVertex ? Json(nullptr)
                                                      : Json::array({t.id(r.lower_pair.first), g.id(r.lower_pair.second)});
  Json w = pairs_to_json(t, g, r.witness);
  w["norm"] = r.witness_norm;
  w["special"] = r.witness_special;
  out["witness"] = std::move(w);
  out["table_sizes"] = Json::array({t.size(), g.size()});
  out["nodes"] = r.nodes;
  out["ms"] = Json{{"lower", r.ms_lower}, {"upper", r.ms_upper}};
  return out;
}

Json program_to_json(const ExplicitProgram& p) {
  auto expr = [](const std::vector<LinTerm>& terms) {
    Json e = Json::array();
    for (const auto& t : terms) e.push_back({t.var, t.coef});
    return e;
  };
  Json vars = Json::array();
  for (const auto& v : p.vars) {
    const char* kind = v.kind == VarKind::kA ? "a" : v.kind == VarKind::kU ? "u" : "z";
    vars.push_back({{"name", v.name}, {"kind", kind}});
  }
  Json rows = Json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"tag", r.tag}, {"terms", expr(r.terms)}, {"sense", r.geq ? ">=" : "<="}, {"rhs", r.rhs}});
  Json comps = Json::array();
  for (const auto& c : p.components)
    comps.push_back({{"label", c.label}, {"terms", expr(c.terms)}, {"constant", c.constant}});
  return Json{{"variables", std::move(vars)}, {"constraints", std::move(rows)}, {"objective", std::move(comps)}};
}

}  // namespace mti
