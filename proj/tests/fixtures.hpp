#pragma once

#include <string>
#include <vector>

#include "mti/merge_tree.hpp"

namespace fx {

inline mti::MergeTree tree(std::vector<mti::VertexRecord> recs) {
  return mti::MergeTree::from_records(std::move(recs));
}

// Two-leaf stars.
inline mti::MergeTree t_a() { return tree({{"a", 0, "r"}, {"b", 1, "r"}, {"r", 2, {}}}); }
inline mti::MergeTree g_a() { return tree({{"a'", 0, "r'"}, {"b'", 1, "r'"}, {"r'", 3, {}}}); }
inline mti::MergeTree t_b() { return tree({{"x", 0, "m"}, {"v", 0.5, "m"}, {"m", 1, {}}}); }
inline mti::MergeTree g_b() { return tree({{"x'", 0, "r'"}, {"w'", 0.8, "r'"}, {"r'", 1, {}}}); }

// Three-leaf caterpillars.
inline mti::MergeTree caterpillar() {
  return tree({{"p", 0, "s"}, {"q", 0.5, "s"}, {"s", 1, "r"}, {"u", 0.2, "r"}, {"r", 1.5, {}}});
}
inline mti::MergeTree caterpillar_q09() {
  return tree({{"p", 0, "s"}, {"q", 0.9, "s"}, {"s", 1, "r"}, {"u", 0.2, "r"}, {"r", 1.5, {}}});
}

}  // namespace fx
