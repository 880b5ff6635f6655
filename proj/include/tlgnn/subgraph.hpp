#pragma once

#include "tlgnn/graph.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tlgnn {

enum class SubgraphKind { Tree, Path, Circuit };

const char* kind_name(SubgraphKind k);
SubgraphKind kind_from_name(const std::string& name);

// One discovered substructure. `nodes` is stored in canonical order:
//   Tree    - center first, then neighbors ascending
//   Path    - endpoint to endpoint, oriented so first id < last id
//   Circuit - cyclic order rotated to start at the minimum id, direction
//             chosen to make the sequence lexicographically smaller
struct SubgraphRecord {
  SubgraphKind kind;
  std::vector<int> nodes;

  std::string canonical_key() const;
};

bool operator==(const SubgraphRecord& a, const SubgraphRecord& b);
bool operator<(const SubgraphRecord& a, const SubgraphRecord& b);

// Canonicalizers; input is any traversal order of the structure.
std::vector<int> canonical_path(const std::vector<int>& nodes);
std::vector<int> canonical_circuit(const std::vector<int>& nodes);

nlohmann::json record_to_json(const SubgraphRecord& r);
SubgraphRecord record_from_json(const nlohmann::json& j);

// Dynamic-programming state over hop-doubled adjacency powers. For each
// ordered pair (v, u), `first_hop_level` holds the exact hop count at which
// the pair was first connected (0 = not yet), and `path_nodes` holds the node
// sequence of one stored simple path from v towards u, excluding u itself.
struct DpState {
  int node_count = 0;
  std::vector<uint16_t> first_hop_level;     // node_count * node_count
  std::vector<std::vector<int>> path_nodes;  // node_count * node_count

  uint64_t op_count = 0;  // elementary operations executed by the sweep

  uint16_t level(int v, int u) const { return first_hop_level[v * node_count + u]; }
  const std::vector<int>& path(int v, int u) const { return path_nodes[v * node_count + u]; }

  static DpState init(const Graph& g);
};

// Emits one Tree record per node whose degree strictly exceeds the threshold:
// the node plus its whole neighborhood.
std::vector<SubgraphRecord> count_trees(const Graph& g, int tree_threshold);

struct EnumerateOptions {
  // Stored/emitted paths are capped at this many nodes; 0 means the default
  // 2^(depth+1). Longer candidates are discarded and never stored.
  int max_path_nodes = 0;
  // Census-only sweep: dedup by hashed key and count, do not keep records.
  bool census_only = false;
};

struct EnumerateResult {
  std::vector<SubgraphRecord> records;  // paths + circuits, discovery order, deduped
  std::map<std::pair<std::string, int>, int64_t> census;  // (kind, node count) -> count
  int64_t duplicate_candidates = 0;  // candidates rejected by dedup
  int64_t invalid_candidates = 0;    // candidates rejected by structural checks
};

// Runs the level-doubling sweep for d = 0..depth over `state` (which must be
// freshly initialized for g). Every stored table entry and every emitted
// record is validated as a simple path/circuit of the host graph before use.
EnumerateResult enumerate_paths_circuits(const Graph& g, int depth, DpState& state,
                                         const EnumerateOptions& options = {});

// Trees + paths + circuits in one call, census included.
EnumerateResult enumerate_subgraphs(const Graph& g, int depth, int tree_threshold,
                                    const EnumerateOptions& options = {});

// Exhaustive reference sets, as canonical keys. Graphs above `max_nodes`
// (hard cap 12) are rejected with BudgetError. Independent of the DP code.
struct BruteForceSets {
  std::set<std::string> paths;     // all simple paths (>= 2 nodes)
  std::set<std::string> circuits;  // all simple cycles (>= 3 nodes)
  std::set<std::string> trees;     // all star records over the threshold
};
BruteForceSets brute_force_subgraphs(const Graph& g, int max_nodes = 12, int tree_threshold = 3);

// Fraction of node pairs at distance in [2, 2^depth] that have a stored path
// table entry after the sweep. Pairs at distance 1 are trivially covered.
double path_pair_coverage(const Graph& g, int depth, const DpState& state);

// True iff `nodes` is a simple path / simple cycle of g (used by tests too).
bool is_simple_path_of(const Graph& g, const std::vector<int>& nodes);
bool is_simple_circuit_of(const Graph& g, const std::vector<int>& nodes);

std::string census_to_csv(const std::map<std::pair<std::string, int>, int64_t>& census);

}  // namespace tlgnn
