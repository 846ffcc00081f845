#pragma once

#include <string>

#include "json.hpp"
#include "mti/bounds.hpp"
#include "mti/exact_oracle.hpp"
#include "mti/induced_map.hpp"

namespace mti {

using Json = nlohmann::ordered_json;

/// Tree files: {"nodes":[{"id","height","parent"}...],"generic":bool}.
/// A file declaring "generic": true is validated strictly.
MergeTree tree_from_json(const Json& j);
MergeTree read_tree(const std::string& path);
Json tree_to_json(const MergeTree& t);

/// Coupling files: {"pairs":[["a","a'"],...]} with ids of the two trees.
PairSet pairs_from_json(const Json& j, const MergeTree& t, const MergeTree& g);
PairSet read_pairs(const std::string& path, const MergeTree& t, const MergeTree& g);
Json pairs_to_json(const MergeTree& t, const MergeTree& g, const PairSet& pairs);

Json cost_to_json(const CouplingContext& ctx);
Json good_map_to_json(const GoodMapReport& r);
Json exact_to_json(const MergeTree& t, const MergeTree& g, const ExactResult& r);
Json family_to_json(const MergeTree& t, const MergeTree& g, const CouplingFamily& f);
Json decomposition_to_json(const MergeTree& t, const MergeTree& g, const DecompositionReport& r);
Json prune_to_json(const PruneResult& r);
Json bounds_to_json(const MergeTree& t, const MergeTree& g, const BoundsResult& r);
Json program_to_json(const ExplicitProgram& p);

/// Reads a whole file; throws ValidationError when it cannot be opened or parsed.
Json read_json(const std::string& path);

}  // namespace mti
