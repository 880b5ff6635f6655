#include "tlgnn/tu_io.hpp"

#include "tlgnn/errors.hpp"
#include "tlgnn/util.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace tlgnn {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    lines.push_back(line.substr(start));
  }
  return lines;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  return parts;
}

long parse_long(const std::string& s, const fs::path& where) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw IngestError("bad integer '" + s + "' in " + where.string());
  }
}

double parse_double(const std::string& s, const fs::path& where) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw IngestError("bad number '" + s + "' in " + where.string());
  }
}

std::vector<long> read_int_column(const fs::path& path) {
  std::vector<long> out;
  for (const auto& line : read_lines(path)) out.push_back(parse_long(line, path));
  return out;
}

// label value -> one-hot index, in sorted order of the raw values
std::vector<std::vector<double>> one_hot_rows(const std::vector<long>& labels) {
  std::set<long> distinct(labels.begin(), labels.end());
  std::map<long, int> index;
  for (long v : distinct) index.emplace(v, static_cast<int>(index.size()));
  std::vector<std::vector<double>> rows(labels.size(), std::vector<double>(distinct.size(), 0.0));
  for (size_t i = 0; i < labels.size(); ++i) rows[i][index.at(labels[i])] = 1.0;
  return rows;
}

}  // namespace

Dataset read_tu_dataset(const fs::path& dir, const std::string& name,
                        const TuReadOptions& options) {
  auto file = [&](const std::string& suffix) { return dir / (name + suffix); };

  std::vector<long> indicator = read_int_column(file("_graph_indicator.txt"));
  std::vector<long> graph_labels_raw = read_int_column(file("_graph_labels.txt"));
  int total_nodes = static_cast<int>(indicator.size());
  int graph_count = static_cast<int>(graph_labels_raw.size());

  // Nodes of a graph must be one contiguous 1-based block.
  std::vector<int> node_offset(graph_count + 1, 0);  // first global node of each graph
  {
    long prev = 0;
    for (int i = 0; i < total_nodes; ++i) {
      long gid = indicator[i];
      if (gid < 1 || gid > graph_count)
        throw IngestError(name + ": graph indicator out of range at node " + std::to_string(i + 1));
      if (gid < prev || gid > prev + 1)
        throw IngestError(name + ": graph indicator must be non-decreasing and gapless");
      if (gid == prev + 1) node_offset[gid - 1] = i;
      prev = gid;
    }
    if (prev != graph_count) throw IngestError(name + ": trailing graphs have no nodes");
    node_offset[graph_count] = total_nodes;
  }

  // Features: node labels > node attributes > degree one-hots > all-ones.
  std::vector<std::vector<double>> features;
  if (fs::exists(file("_node_labels.txt"))) {
    std::vector<long> labels = read_int_column(file("_node_labels.txt"));
    if (static_cast<int>(labels.size()) != total_nodes)
      throw IngestError(name + ": node label count does not match node count");
    features = one_hot_rows(labels);
  } else if (fs::exists(file("_node_attributes.txt"))) {
    auto path = file("_node_attributes.txt");
    for (const auto& line : read_lines(path)) {
      std::vector<double> row;
      for (const auto& part : split_commas(line)) row.push_back(parse_double(part, path));
      features.push_back(std::move(row));
    }
    if (static_cast<int>(features.size()) != total_nodes)
      throw IngestError(name + ": node attribute count does not match node count");
  }

  std::vector<std::pair<int, int>> arcs;
  for (const auto& line : read_lines(file("_A.txt"))) {
    auto parts = split_commas(line);
    if (parts.size() != 2) throw IngestError(name + "_A.txt: expected 'i, j' per line");
    long u = parse_long(parts[0], file("_A.txt"));
    long v = parse_long(parts[1], file("_A.txt"));
    if (u < 1 || u > total_nodes || v < 1 || v > total_nodes)
      throw IngestError(name + "_A.txt: node id out of range");
    arcs.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }

  // Labels remapped to contiguous 0-based classes, sorted by raw value.
  std::map<long, int> class_of;
  for (long v : std::set<long>(graph_labels_raw.begin(), graph_labels_raw.end()))
    class_of.emplace(v, static_cast<int>(class_of.size()));

  std::vector<std::vector<std::pair<int, int>>> edges_per_graph(graph_count);
  for (const auto& [u, v] : arcs) {
    long gu = indicator[u], gv = indicator[v];
    if (gu != gv) throw IngestError(name + "_A.txt: edge crosses graphs");
    int base = node_offset[gu - 1];
    edges_per_graph[gu - 1].emplace_back(u - base, v - base);
  }

  Dataset ds;
  ds.name = name;
  for (int g = 0; g < graph_count; ++g) {
    int n = node_offset[g + 1] - node_offset[g];
    std::vector<std::vector<double>> feats;
    if (!features.empty())
      feats.assign(features.begin() + node_offset[g], features.begin() + node_offset[g + 1]);
    Graph graph = Graph::make(n, std::move(edges_per_graph[g]), std::move(feats),
                              class_of.at(graph_labels_raw[g]));
    ds.graphs.push_back(std::move(graph));
  }

  if (features.empty() && options.degree_one_hot_if_unlabeled) {
    std::vector<long> degrees;
    for (const auto& g : ds.graphs) {
      auto adj = g.adjacency_list();
      for (const auto& nbrs : adj) degrees.push_back(static_cast<long>(nbrs.size()));
    }
    auto rows = one_hot_rows(degrees);
    size_t at = 0;
    for (auto& g : ds.graphs) {
      g.node_features.assign(rows.begin() + at, rows.begin() + at + g.node_count);
      at += g.node_count;
    }
  }

  ds.finalize();
  return ds;
}

namespace {

// True when every row is exactly one 1.0 among 0.0s and every column is used,
// so labels round-trip through the sorted-distinct remapping.
bool is_complete_one_hot(const Dataset& ds, std::vector<long>& labels_out) {
  int width = ds.feature_width;
  if (width < 2) return false;
  std::vector<char> used(width, 0);
  for (const auto& g : ds.graphs) {
    for (const auto& row : g.node_features) {
      int hot = -1;
      for (int i = 0; i < width; ++i) {
        if (row[i] == 1.0) {
          if (hot >= 0) return false;
          hot = i;
        } else if (row[i] != 0.0) {
          return false;
        }
      }
      if (hot < 0) return false;
      used[hot] = 1;
      labels_out.push_back(hot);
    }
  }
  return std::all_of(used.begin(), used.end(), [](char c) { return c != 0; });
}

bool is_constant_ones(const Dataset& ds) {
  if (ds.feature_width != 1) return false;
  for (const auto& g : ds.graphs)
    for (const auto& row : g.node_features)
      if (row[0] != 1.0) return false;
  return true;
}

}  // namespace

void write_tu_dataset(const Dataset& ds, const fs::path& dir) {
  const std::string& name = ds.name;
  if (name.empty()) throw ConfigError("write_tu_dataset: dataset needs a name");

  std::string a_txt, indicator_txt, labels_txt;
  int gid = 0, base = 0;
  for (const auto& g : ds.graphs) {
    ++gid;
    for (int v = 0; v < g.node_count; ++v) indicator_txt += std::to_string(gid) + "\n";
    for (const auto& e : g.edges) {
      int u = base + e.first + 1, v = base + e.second + 1;
      a_txt += std::to_string(u) + ", " + std::to_string(v) + "\n";
      a_txt += std::to_string(v) + ", " + std::to_string(u) + "\n";
    }
    labels_txt += std::to_string(g.graph_label) + "\n";
    base += g.node_count;
  }

  atomic_write_file(dir / (name + "_A.txt"), a_txt);
  atomic_write_file(dir / (name + "_graph_indicator.txt"), indicator_txt);
  atomic_write_file(dir / (name + "_graph_labels.txt"), labels_txt);

  std::vector<long> labels;
  if (is_complete_one_hot(ds, labels)) {
    std::string txt;
    for (long v : labels) txt += std::to_string(v) + "\n";
    atomic_write_file(dir / (name + "_node_labels.txt"), txt);
  } else if (!is_constant_ones(ds)) {
    std::string txt;
    char buf[64];
    for (const auto& g : ds.graphs) {
      for (const auto& row : g.node_features) {
        for (size_t i = 0; i < row.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g", row[i]);
          txt += (i ? ", " : "");
          txt += buf;
        }
        txt += "\n";
      }
    }
    atomic_write_file(dir / (name + "_node_attributes.txt"), txt);
  }
}

}  // namespace tlgnn
