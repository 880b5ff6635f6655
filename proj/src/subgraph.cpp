#include "tlgnn/subgraph.hpp"

#include "tlgnn/errors.hpp"
#include "tlgnn/util.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <unordered_set>

namespace tlgnn {

const char* kind_name(SubgraphKind k) {
  switch (k) {
    case SubgraphKind::Tree: return "tree";
    case SubgraphKind::Path: return "path";
    case SubgraphKind::Circuit: return "circuit";
  }
  return "?";
}

SubgraphKind kind_from_name(const std::string& name) {
  if (name == "tree") return SubgraphKind::Tree;
  if (name == "path") return SubgraphKind::Path;
  if (name == "circuit") return SubgraphKind::Circuit;
  throw IngestError("unknown subgraph kind '" + name + "'");
}

std::string SubgraphRecord::canonical_key() const {
  std::string key(1, "TPC"[static_cast<int>(kind)]);
  for (int v : nodes) {
    key += '|';
    key += std::to_string(v);
  }
  return key;
}

bool operator==(const SubgraphRecord& a, const SubgraphRecord& b) {
  return a.kind == b.kind && a.nodes == b.nodes;
}

bool operator<(const SubgraphRecord& a, const SubgraphRecord& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.nodes < b.nodes;
}

std::vector<int> canonical_path(const std::vector<int>& nodes) {
  std::vector<int> out = nodes;
  if (!out.empty() && out.front() > out.back()) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<int> canonical_circuit(const std::vector<int>& nodes) {
  int L = static_cast<int>(nodes.size());
  if (L == 0) return {};
  int start = static_cast<int>(std::min_element(nodes.begin(), nodes.end()) - nodes.begin());
  std::vector<int> fwd(L), bwd(L);
  for (int i = 0; i < L; ++i) {
    fwd[i] = nodes[(start + i) % L];
    bwd[i] = nodes[(start - i % L + L) % L];
  }
  return std::min(fwd, bwd);
}

nlohmann::json record_to_json(const SubgraphRecord& r) {
  return {{"kind", kind_name(r.kind)}, {"nodes", r.nodes}};
}

SubgraphRecord record_from_json(const nlohmann::json& j) {
  try {
    return {kind_from_name(j.at("kind").get<std::string>()),
            j.at("nodes").get<std::vector<int>>()};
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("record json: ") + e.what());
  }
}

DpState DpState::init(const Graph& g) {
  DpState s;
  s.node_count = g.node_count;
  s.first_hop_level.assign(static_cast<size_t>(g.node_count) * g.node_count, 0);
  s.path_nodes.assign(static_cast<size_t>(g.node_count) * g.node_count, {});
  for (const auto& e : g.edges) {
    s.first_hop_level[e.first * g.node_count + e.second] = 1;
    s.first_hop_level[e.second * g.node_count + e.first] = 1;
    s.path_nodes[e.first * g.node_count + e.second] = {e.first};
    s.path_nodes[e.second * g.node_count + e.first] = {e.second};
  }
  return s;
}

std::vector<SubgraphRecord> count_trees(const Graph& g, int tree_threshold) {
  std::vector<SubgraphRecord> records;
  auto adj = g.adjacency_list();
  for (int v = 0; v < g.node_count; ++v) {
    if (static_cast<int>(adj[v].size()) > tree_threshold) {
      std::vector<int> nodes;
      nodes.reserve(adj[v].size() + 1);
      nodes.push_back(v);
      nodes.insert(nodes.end(), adj[v].begin(), adj[v].end());  // already ascending
      records.push_back({SubgraphKind::Tree, std::move(nodes)});
    }
  }
  return records;
}

bool is_simple_path_of(const Graph& g, const std::vector<int>& nodes) {
  if (nodes.size() < 2) return false;
  std::vector<int> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (sorted.front() < 0 || sorted.back() >= g.node_count) return false;
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!g.has_edge(nodes[i], nodes[i + 1])) return false;
  return true;
}

bool is_simple_circuit_of(const Graph& g, const std::vector<int>& nodes) {
  if (nodes.size() < 3) return false;
  if (!is_simple_path_of(g, nodes)) return false;
  return g.has_edge(nodes.back(), nodes.front());
}

namespace {

// Reusable mark array for O(length) distinctness checks.
struct Stamp {
  std::vector<int> mark;
  int gen = 0;
  explicit Stamp(int n) : mark(n, 0) {}
  void next() { ++gen; }
  bool seen(int v) { return mark[v] == gen; }
  void set(int v) { mark[v] = gen; }
};

uint64_t hash_candidate(SubgraphKind kind, const std::vector<int>& nodes) {
  uint64_t h = fnv1a64(kind_name(kind));
  return fnv1a64(
      std::string_view(reinterpret_cast<const char*>(nodes.data()), nodes.size() * sizeof(int)),
      h);
}

struct Dedup {
  bool hashed;
  std::unordered_set<std::string> keys;
  std::unordered_set<uint64_t> hashes;
  explicit Dedup(bool census_only) : hashed(census_only) {}

  bool insert(const SubgraphRecord& r) {
    if (hashed) return hashes.insert(hash_candidate(r.kind, r.nodes)).second;
    return keys.insert(r.canonical_key()).second;
  }
};

}  // namespace

EnumerateResult enumerate_paths_circuits(const Graph& g, int depth, DpState& state,
                                         const EnumerateOptions& options) {
  if (depth < 0 || depth > 14) throw ConfigError("enumerate: depth must be in [0, 14]");
  if (state.node_count != g.node_count)
    throw ConfigError("enumerate: state does not match graph");
  const int n = g.node_count;
  const int max_path_nodes =
      options.max_path_nodes > 0 ? options.max_path_nodes : (1 << (depth + 1));

  EnumerateResult result;
  Dedup dedup(options.census_only);
  Stamp stamp(n);
  auto level = [&](int v, int u) -> uint16_t& {
    return state.first_hop_level[static_cast<size_t>(v) * n + u];
  };
  auto path = [&](int v, int u) -> std::vector<int>& {
    return state.path_nodes[static_cast<size_t>(v) * n + u];
  };
  auto emit = [&](SubgraphKind kind, std::vector<int> nodes) {
    SubgraphRecord rec{kind, std::move(nodes)};
    if (!dedup.insert(rec)) {
      ++result.duplicate_candidates;
      return;
    }
    result.census[{kind_name(kind), static_cast<int>(rec.nodes.size())}]++;
    if (!options.census_only) result.records.push_back(std::move(rec));
  };

  std::vector<int> scratch;
  for (int d = 0; d <= depth; ++d) {
    const int pow2d = 1 << d;
    for (int v = 0; v < n; ++v) {
      for (int mu = 0; mu < n; ++mu) {
        ++state.op_count;  // reachability test at exactly 2^d hops
        if (level(v, mu) != pow2d) continue;
        const auto& p_mu_v = path(mu, v);
        for (int a = 0; a < n; ++a) {
          state.op_count += pow2d;  // scan of the i-indexed hop powers
          if (a == v) continue;     // degenerate two-segment loop
          int i = level(mu, a);
          if (i < 1 || i > pow2d) continue;

          state.op_count += p_mu_v.size();
          if (std::find(p_mu_v.begin(), p_mu_v.end(), a) != p_mu_v.end()) continue;

          const auto& p_v_a = path(v, a);
          if (!p_v_a.empty()) {
            // Closing segment exists: circuit candidate P_v(mu)+P_mu(a)+P_a(v).
            const auto& s1 = path(v, mu);
            const auto& s2 = path(mu, a);
            const auto& s3 = path(a, v);
            scratch.clear();
            scratch.insert(scratch.end(), s1.begin(), s1.end());
            scratch.insert(scratch.end(), s2.begin(), s2.end());
            scratch.insert(scratch.end(), s3.begin(), s3.end());
            state.op_count += scratch.size();
            // Segments can overlap, so the candidate must be re-validated.
            stamp.next();
            bool ok = scratch.size() >= 3;
            for (int w : scratch) {
              if (stamp.seen(w)) {
                ok = false;
                break;
              }
              stamp.set(w);
            }
            if (ok) {
              for (size_t t = 0; t < scratch.size() && ok; ++t)
                ok = g.has_edge(scratch[t], scratch[(t + 1) % scratch.size()]);
            }
            if (!ok) {
              ++result.invalid_candidates;
              continue;
            }
            emit(SubgraphKind::Circuit, canonical_circuit(scratch));
          } else {
            // New pair: path candidate P_v(mu)+P_mu(a), then endpoint a.
            const auto& s1 = path(v, mu);
            const auto& s2 = path(mu, a);
            scratch.clear();
            scratch.insert(scratch.end(), s1.begin(), s1.end());
            scratch.insert(scratch.end(), s2.begin(), s2.end());
            state.op_count += scratch.size();
            if (static_cast<int>(scratch.size()) + 1 > max_path_nodes) continue;
            stamp.next();
            stamp.set(a);
            bool ok = true;
            for (int w : scratch) {
              if (stamp.seen(w)) {
                ok = false;
                break;
              }
              stamp.set(w);
            }
            if (!ok) {
              ++result.invalid_candidates;
              continue;
            }
            // First discovery of (v, a): record the level and both directions.
            level(v, a) = level(a, v) = static_cast<uint16_t>(pow2d + i);
            const auto& r1 = path(a, mu);
            const auto& r2 = path(mu, v);
            std::vector<int> reverse_path;
            reverse_path.reserve(r1.size() + r2.size());
            reverse_path.insert(reverse_path.end(), r1.begin(), r1.end());
            reverse_path.insert(reverse_path.end(), r2.begin(), r2.end());
            path(a, v) = std::move(reverse_path);
            std::vector<int> full = scratch;
            full.push_back(a);
            path(v, a) = scratch;
            emit(SubgraphKind::Path, canonical_path(full));
          }
        }
      }
    }
  }
  return result;
}

EnumerateResult enumerate_subgraphs(const Graph& g, int depth, int tree_threshold,
                                    const EnumerateOptions& options) {
  DpState state = DpState::init(g);
  EnumerateResult result = enumerate_paths_circuits(g, depth, state, options);
  auto trees = count_trees(g, tree_threshold);
  for (const auto& t : trees)
    result.census[{kind_name(SubgraphKind::Tree), static_cast<int>(t.nodes.size())}]++;
  if (!options.census_only)
    result.records.insert(result.records.begin(), trees.begin(), trees.end());
  return result;
}

double path_pair_coverage(const Graph& g, int depth, const DpState& state) {
  const int n = g.node_count;
  auto adj = g.adjacency_list();
  const int max_dist = 1 << depth;
  int64_t eligible = 0, covered = 0;
  std::vector<int> dist(n);
  std::vector<int> queue(n);
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    int head = 0, tail = 0;
    dist[src] = 0;
    queue[tail++] = src;
    while (head < tail) {
      int v = queue[head++];
      for (int u : adj[v])
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue[tail++] = u;
        }
    }
    for (int u = 0; u < n; ++u) {
      if (u == src || dist[u] < 2 || dist[u] > max_dist) continue;
      ++eligible;
      if (!state.path(src, u).empty()) ++covered;
    }
  }
  return eligible == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(eligible);
}

namespace {

// Exhaustive DFS enumeration, deliberately independent of the DP sweep.
struct BruteForcer {
  const Graph& g;
  std::vector<std::vector<int>> adj;
  std::vector<char> visited;
  std::vector<int> stack;
  BruteForceSets& out;

  BruteForcer(const Graph& graph, BruteForceSets& sets)
      : g(graph), adj(graph.adjacency_list()), visited(graph.node_count, 0), out(sets) {}

  void paths_from(int v) {
    visited[v] = 1;
    stack.push_back(v);
    if (stack.size() >= 2 && stack.front() < stack.back())
      out.paths.insert(SubgraphRecord{SubgraphKind::Path, stack}.canonical_key());
    for (int u : adj[v])
      if (!visited[u]) paths_from(u);
    stack.pop_back();
    visited[v] = 0;
  }

  // Cycles anchored at their minimum node r; only nodes > r may extend.
  void cycles_from(int r, int v) {
    visited[v] = 1;
    stack.push_back(v);
    for (int u : adj[v]) {
      if (u == r && stack.size() >= 3 && stack[1] < stack.back())
        out.circuits.insert(SubgraphRecord{SubgraphKind::Circuit, stack}.canonical_key());
      if (u > r && !visited[u]) cycles_from(r, u);
    }
    stack.pop_back();
    visited[v] = 0;
  }
};

}  // namespace

BruteForceSets brute_force_subgraphs(const Graph& g, int max_nodes, int tree_threshold) {
  if (max_nodes > 12) throw ConfigError("brute_force_subgraphs: cap is 12 nodes");
  if (g.node_count > max_nodes)
    throw BudgetError("brute_force_subgraphs: graph exceeds " + std::to_string(max_nodes) +
                      " nodes");
  BruteForceSets sets;
  BruteForcer bf(g, sets);
  for (int v = 0; v < g.node_count; ++v) bf.paths_from(v);
  for (int r = 0; r < g.node_count; ++r) bf.cycles_from(r, r);
  for (const auto& t : count_trees(g, tree_threshold)) sets.trees.insert(t.canonical_key());
  return sets;
}

std::string census_to_csv(const std::map<std::pair<std::string, int>, int64_t>& census) {
  std::ostringstream out;
  out << "kind,node_count,count\n";
  for (const auto& [key, count] : census)
    out << key.first << ',' << key.second << ',' << count << '\n';
  return out.str();
}

}  // namespace tlgnn
