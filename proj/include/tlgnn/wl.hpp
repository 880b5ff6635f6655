#pragma once

#include "tlgnn/graph.hpp"

#include <cstdint>
#include <vector>

namespace tlgnn {

// Result of 1-dimensional Weisfeiler-Leman color refinement.
struct WlColoring {
  std::vector<int> colors;                        // stable color per node
  int rounds = 0;                                 // refinement rounds applied
  std::vector<std::pair<int, int64_t>> histogram; // (color, count), sorted by color
};

// Refines node colors until the partition stabilizes or max_rounds is hit.
// Initial colors distinguish distinct feature vectors; each round relabels
// (own color, sorted multiset of neighbor colors) injectively. Color ids are
// assigned in first-appearance order over ascending node ids, so the coloring
// is deterministic.
WlColoring wl_refine(const Graph& g, int max_rounds);
inline WlColoring wl_refine(const Graph& g) { return wl_refine(g, g.node_count); }

// Joint refinement on the disjoint union: true iff the two graphs have equal
// color histograms at every round up to the shared fixed point. max_rounds < 0
// means the default cap (total node count).
bool wl_equivalent(const Graph& a, const Graph& b, int max_rounds = -1);

}  // namespace tlgnn
