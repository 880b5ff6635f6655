#include "tlgnn/wl.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <string>

namespace tlgnn {

namespace {

// First-appearance-order injective relabeling of string keys.
std::vector<int> assign_ids(const std::vector<std::string>& keys) {
  std::map<std::string, int> ids;
  std::vector<int> out(keys.size());
  for (size_t v = 0; v < keys.size(); ++v) {
    auto [it, inserted] = ids.emplace(keys[v], static_cast<int>(ids.size()));
    out[v] = it->second;
  }
  return out;
}

std::vector<int> initial_colors(const std::vector<const std::vector<double>*>& feats) {
  std::vector<std::string> keys(feats.size());
  for (size_t v = 0; v < feats.size(); ++v) {
    const auto& row = *feats[v];
    keys[v].assign(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
  }
  return assign_ids(keys);
}

int color_count(const std::vector<int>& colors) {
  return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
}

// One refinement round; returns new colors (first-appearance ids).
std::vector<int> refine_once(const std::vector<std::vector<int>>& adj,
                             const std::vector<int>& colors) {
  std::vector<std::string> keys(colors.size());
  std::vector<int> nbr;
  for (size_t v = 0; v < colors.size(); ++v) {
    nbr.clear();
    for (int u : adj[v]) nbr.push_back(colors[u]);
    std::sort(nbr.begin(), nbr.end());
    nbr.push_back(colors[v]);
    keys[v].assign(reinterpret_cast<const char*>(nbr.data()), nbr.size() * sizeof(int));
  }
  return assign_ids(keys);
}

std::vector<std::pair<int, int64_t>> side_histogram(const std::vector<int>& colors, int begin,
                                                    int end) {
  std::map<int, int64_t> counts;
  for (int v = begin; v < end; ++v) counts[colors[v]]++;
  return {counts.begin(), counts.end()};
}

}  // namespace

WlColoring wl_refine(const Graph& g, int max_rounds) {
  std::vector<const std::vector<double>*> feats;
  feats.reserve(g.node_count);
  for (const auto& row : g.node_features) feats.push_back(&row);
  auto adj = g.adjacency_list();
  std::vector<int> colors = initial_colors(feats);
  int rounds = 0;
  while (rounds < max_rounds) {
    std::vector<int> next = refine_once(adj, colors);
    if (color_count(next) == color_count(colors)) break;  // splits only, so equal count = stable
    colors = std::move(next);
    ++rounds;
  }
  WlColoring out;
  out.colors = std::move(colors);
  out.rounds = rounds;
  out.histogram = side_histogram(out.colors, 0, g.node_count);
  return out;
}

bool wl_equivalent(const Graph& a, const Graph& b, int max_rounds) {
  int n1 = a.node_count, n2 = b.node_count;
  if (max_rounds < 0) max_rounds = n1 + n2;

  // Disjoint union; b's nodes are shifted by n1.
  std::vector<const std::vector<double>*> feats;
  feats.reserve(n1 + n2);
  for (const auto& row : a.node_features) feats.push_back(&row);
  for (const auto& row : b.node_features) feats.push_back(&row);
  std::vector<std::vector<int>> adj(n1 + n2);
  for (const auto& e : a.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (const auto& e : b.edges) {
    adj[n1 + e.first].push_back(n1 + e.second);
    adj[n1 + e.second].push_back(n1 + e.first);
  }

  std::vector<int> colors = initial_colors(feats);
  for (int round = 0; ; ++round) {
    if (side_histogram(colors, 0, n1) != side_histogram(colors, n1, n1 + n2)) return false;
    if (round >= max_rounds) break;
    std::vector<int> next = refine_once(adj, colors);
    if (color_count(next) == color_count(colors)) break;
    colors = std::move(next);
  }
  return true;
}

}  // namespace tlgnn
