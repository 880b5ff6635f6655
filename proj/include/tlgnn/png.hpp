#pragma once

#include "tlgnn/graph.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace tlgnn {

// Witness of a degree-preserving double edge swap: edges (a,b) and (i,j) were
// replaced by (a,j) and (i,b).
struct SwapWitness {
  std::array<std::pair<int, int>, 2> removed;
  std::array<std::pair<int, int>, 2> added;
};

// Checks the sibling conditions: equal node counts, equal edge counts, equal
// per-index features, equal per-node neighbor feature multisets, and an edge
// symmetric difference that is exactly one double swap. Returns the witness
// when all hold.
std::optional<SwapWitness> check_png(const Graph& a, const Graph& b);

// Applies one swap; endpoints must form two disjoint existing edges and the
// new edges must not already exist.
Graph apply_swap(const Graph& g, const SwapWitness& w);

struct SpngOptions {
  int pair_count = 100;
  int node_count = 12;
  double edge_prob = 0.25;
  int feature_alphabet = 3;
  uint64_t seed = 0;
  bool require_wl_equivalent = true;   // keep only refinement-indistinguishable pairs
  bool require_non_isomorphic = true;  // certify with the exact search (n <= 16)
  int max_base_graphs = 200000;        // rejection budget
};

struct PngPair {
  Graph first, second;
  SwapWitness witness;
  bool wl_certified = false;
  bool iso_certified = false;  // exact search proved non-isomorphism
};

struct SpngResult {
  std::vector<PngPair> pairs;
  Dataset dataset;  // first/second interleaved, labels 0/1
  // generation statistics
  int64_t base_graphs_tried = 0;
  int64_t swaps_tested = 0;
  int64_t rejected_no_swap = 0;      // base graph had no admissible swap
  int64_t rejected_wl = 0;           // swaps failing the refinement filter
  int64_t rejected_isomorphic = 0;   // swaps producing an isomorphic sibling
};

// Draws base graphs, applies one admissible random swap each, filters by the
// requested certificates. Deterministic under the seed. Throws
// GenerationBudgetError when max_base_graphs is exhausted.
SpngResult generate_spng(const SpngOptions& options);

nlohmann::json spng_witness_json(const SpngResult& r, const SpngOptions& options);

// Max absolute componentwise difference of the two embeddings.
double pair_separation_score(const std::function<std::vector<double>(const Graph&)>& embed,
                             const PngPair& pair);

}  // namespace tlgnn
