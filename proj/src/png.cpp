#include "tlgnn/png.hpp"

#include "tlgnn/errors.hpp"
#include "tlgnn/isomorphism.hpp"
#include "tlgnn/util.hpp"
#include "tlgnn/wl.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

namespace tlgnn {

namespace {

std::pair<int, int> norm_edge(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// Neighbor feature multisets per node, as sorted key lists over a shared
// feature-vector keying.
std::vector<std::vector<int>> neighbor_feature_multisets(const Graph& g,
                                                         std::map<std::string, int>& keys) {
  std::vector<int> node_key(g.node_count);
  for (int v = 0; v < g.node_count; ++v) {
    const auto& row = g.node_features[v];
    std::string k(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
    auto [it, ins] = keys.emplace(k, static_cast<int>(keys.size()));
    node_key[v] = it->second;
  }
  std::vector<std::vector<int>> out(g.node_count);
  for (const auto& e : g.edges) {
    out[e.first].push_back(node_key[e.second]);
    out[e.second].push_back(node_key[e.first]);
  }
  for (auto& m : out) std::sort(m.begin(), m.end());
  return out;
}

}  // namespace

std::optional<SwapWitness> check_png(const Graph& a, const Graph& b) {
  if (a.node_count != b.node_count) return std::nullopt;
  if (a.edge_count() != b.edge_count()) return std::nullopt;
  if (a.node_features != b.node_features) return std::nullopt;

  std::vector<std::pair<int, int>> removed, added;
  std::set_difference(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                      std::back_inserter(removed));
  std::set_difference(b.edges.begin(), b.edges.end(), a.edges.begin(), a.edges.end(),
                      std::back_inserter(added));
  if (removed.size() != 2 || added.size() != 2) return std::nullopt;

  std::map<std::string, int> keys;
  if (neighbor_feature_multisets(a, keys) != neighbor_feature_multisets(b, keys))
    return std::nullopt;

  // Orient the removed edges so that added == {(p,s),(r,q)}.
  std::set<std::pair<int, int>> added_set(added.begin(), added.end());
  for (int flip1 = 0; flip1 < 2; ++flip1) {
    for (int flip2 = 0; flip2 < 2; ++flip2) {
      int p = flip1 ? removed[0].second : removed[0].first;
      int q = flip1 ? removed[0].first : removed[0].second;
      int r = flip2 ? removed[1].second : removed[1].first;
      int s = flip2 ? removed[1].first : removed[1].second;
      std::set<std::pair<int, int>> want{norm_edge(p, s), norm_edge(r, q)};
      if (want == added_set) {
        SwapWitness w;
        w.removed = {std::make_pair(p, q), std::make_pair(r, s)};
        w.added = {std::make_pair(p, s), std::make_pair(r, q)};
        return w;
      }
    }
  }
  return std::nullopt;
}

Graph apply_swap(const Graph& g, const SwapWitness& w) {
  for (const auto& e : w.removed)
    if (!g.has_edge(e.first, e.second)) throw ConfigError("apply_swap: edge to remove is absent");
  for (const auto& e : w.added)
    if (g.has_edge(e.first, e.second) || e.first == e.second)
      throw ConfigError("apply_swap: edge to add already exists or is degenerate");
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> drop{norm_edge(w.removed[0].first, w.removed[0].second),
                                     norm_edge(w.removed[1].first, w.removed[1].second)};
  for (const auto& e : g.edges)
    if (!drop.count(e)) edges.push_back(e);
  for (const auto& e : w.added) edges.push_back(norm_edge(e.first, e.second));
  return Graph::make(g.node_count, std::move(edges), g.node_features, g.graph_label);
}

SpngResult generate_spng(const SpngOptions& options) {
  if (options.pair_count < 1 || options.node_count < 4)
    throw ConfigError("generate_spng: need pair_count >= 1 and node_count >= 4");
  if (options.require_non_isomorphic && options.node_count > 16)
    throw ConfigError("generate_spng: exact certification caps node_count at 16");

  std::mt19937_64 rng(seed_for(options.seed, "spng"));
  SpngResult result;

  while (static_cast<int>(result.pairs.size()) < options.pair_count) {
    if (result.base_graphs_tried >= options.max_base_graphs)
      throw GenerationBudgetError(
          "generate_spng: budget of " + std::to_string(options.max_base_graphs) +
          " base graphs exhausted with " + std::to_string(result.pairs.size()) + "/" +
          std::to_string(options.pair_count) + " pairs (swaps tested " +
          std::to_string(result.swaps_tested) + ", wl rejects " +
          std::to_string(result.rejected_wl) + ", iso rejects " +
          std::to_string(result.rejected_isomorphic) + ")");
    ++result.base_graphs_tried;
    uint64_t graph_seed = rng();
    Graph g1 = random_graph(options.node_count, options.edge_prob, options.feature_alphabet,
                            graph_seed);

    // All admissible swap candidates: ordered pairs of disjoint edges with
    // matching endpoint features whose replacement edges are absent.
    struct Candidate {
      SwapWitness w;
    };
    std::vector<Candidate> candidates;
    int ec = g1.edge_count();
    for (int e1 = 0; e1 < ec; ++e1) {
      for (int e2 = e1 + 1; e2 < ec; ++e2) {
        for (int flip1 = 0; flip1 < 2; ++flip1) {
          for (int flip2 = 0; flip2 < 2; ++flip2) {
            int a = flip1 ? g1.edges[e1].second : g1.edges[e1].first;
            int b = flip1 ? g1.edges[e1].first : g1.edges[e1].second;
            int i = flip2 ? g1.edges[e2].second : g1.edges[e2].first;
            int j = flip2 ? g1.edges[e2].first : g1.edges[e2].second;
            if (a == i || a == j || b == i || b == j) continue;
            if (g1.node_features[a] != g1.node_features[i]) continue;
            if (g1.node_features[b] != g1.node_features[j]) continue;
            if (g1.has_edge(a, j) || g1.has_edge(i, b)) continue;
            SwapWitness w;
            w.removed = {std::make_pair(a, b), std::make_pair(i, j)};
            w.added = {std::make_pair(a, j), std::make_pair(i, b)};
            candidates.push_back({w});
          }
        }
      }
    }
    if (candidates.empty()) {
      ++result.rejected_no_swap;
      continue;
    }
    for (size_t i = candidates.size(); i > 1; --i)
      std::swap(candidates[i - 1], candidates[rand_below(rng, i)]);

    for (const auto& cand : candidates) {
      ++result.swaps_tested;
      Graph g2 = apply_swap(g1, cand.w);
      auto witness = check_png(g1, g2);
      if (!witness) continue;  // defensive; admissibility should guarantee it
      PngPair pair;
      pair.first = g1;
      pair.second = g2;
      pair.witness = *witness;
      pair.wl_certified = wl_equivalent(g1, g2);
      if (options.require_wl_equivalent && !pair.wl_certified) {
        ++result.rejected_wl;
        continue;
      }
      if (options.require_non_isomorphic) {
        if (is_isomorphic_small(g1, g2)) {
          ++result.rejected_isomorphic;
          continue;
        }
        pair.iso_certified = true;
      }
      pair.first.graph_label = 0;
      pair.second.graph_label = 1;
      result.pairs.push_back(std::move(pair));
      break;
    }
  }

  result.dataset.name = "SPNG";
  for (const auto& p : result.pairs) {
    result.dataset.graphs.push_back(p.first);
    result.dataset.graphs.push_back(p.second);
  }
  result.dataset.finalize();
  return result;
}

nlohmann::json spng_witness_json(const SpngResult& r, const SpngOptions& options) {
  nlohmann::json j;
  j["options"] = {{"pair_count", options.pair_count},
                  {"node_count", options.node_count},
                  {"edge_prob", options.edge_prob},
                  {"feature_alphabet", options.feature_alphabet},
                  {"seed", options.seed},
                  {"require_wl_equivalent", options.require_wl_equivalent},
                  {"require_non_isomorphic", options.require_non_isomorphic}};
  j["stats"] = {{"base_graphs_tried", r.base_graphs_tried},
                {"swaps_tested", r.swaps_tested},
                {"rejected_no_swap", r.rejected_no_swap},
                {"rejected_wl", r.rejected_wl},
                {"rejected_isomorphic", r.rejected_isomorphic}};
  j["pairs"] = nlohmann::json::array();
  for (size_t i = 0; i < r.pairs.size(); ++i) {
    const auto& p = r.pairs[i];
    auto edge_json = [](const std::pair<int, int>& e) {
      return nlohmann::json::array({e.first, e.second});
    };
    j["pairs"].push_back({{"index", i},
                          {"removed", {edge_json(p.witness.removed[0]),
                                       edge_json(p.witness.removed[1])}},
                          {"added", {edge_json(p.witness.added[0]),
                                     edge_json(p.witness.added[1])}},
                          {"wl_certified", p.wl_certified},
                          {"iso_certified", p.iso_certified}});
  }
  return j;
}

double pair_separation_score(const std::function<std::vector<double>(const Graph&)>& embed,
                             const PngPair& pair) {
  std::vector<double> e1 = embed(pair.first);
  std::vector<double> e2 = embed(pair.second);
  if (e1.size() != e2.size()) throw ConfigError("pair_separation_score: embedding sizes differ");
  double score = 0.0;
  for (size_t i = 0; i < e1.size(); ++i) score = std::max(score, std::abs(e1[i] - e2[i]));
  return score;
}

}  // namespace tlgnn
