#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlgnn/errors.hpp"
#include "tlgnn/graph.hpp"
#include "tlgnn/tu_io.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace tlgnn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("tlgnn_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Two graphs: an edge pair 1-2 with node labels 0,1 and a triangle 3-4-5
// with labels 1,1,0. Graph labels -1/+1 exercise the class remap.
void write_fixture(const fs::path& dir, const std::string& name) {
  put(dir / (name + "_A.txt"), "1, 2\n2, 1\n3, 4\n4, 3\n4, 5\n5, 4\n3, 5\n5, 3\n");
  put(dir / (name + "_graph_indicator.txt"), "1\n1\n2\n2\n2\n");
  put(dir / (name + "_graph_labels.txt"), "-1\n1\n");
  put(dir / (name + "_node_labels.txt"), "0\n1\n1\n1\n0\n");
}

}  // namespace

TEST_CASE("reads the standard layout with node labels") {
  TempDir tmp("tu_read");
  write_fixture(tmp.path, "TOY");
  Dataset ds = read_tu_dataset(tmp.path, "TOY");
  REQUIRE(ds.graphs.size() == 2);
  CHECK(ds.class_count == 2);
  CHECK(ds.feature_width == 2);  // labels {0, 1} one-hot
  CHECK(ds.graphs[0].graph_label == 0);
  CHECK(ds.graphs[1].graph_label == 1);
  CHECK(ds.graphs[0].node_count == 2);
  CHECK(ds.graphs[0].edge_count() == 1);
  CHECK(ds.graphs[1].node_count == 3);
  CHECK(ds.graphs[1].edge_count() == 3);
  CHECK(ds.graphs[0].node_features[0] == std::vector<double>{1.0, 0.0});
  CHECK(ds.graphs[1].node_features[2] == std::vector<double>{1.0, 0.0});
}

TEST_CASE("duplicate arcs collapse to one undirected edge") {
  TempDir tmp("tu_dup");
  put(tmp.path / "D_A.txt", "1, 2\n2, 1\n2, 1\n");
  put(tmp.path / "D_graph_indicator.txt", "1\n1\n");
  put(tmp.path / "D_graph_labels.txt", "0\n");
  Dataset ds = read_tu_dataset(tmp.path, "D");
  CHECK(ds.graphs[0].edge_count() == 1);
}

TEST_CASE("node attributes take over when labels are absent") {
  TempDir tmp("tu_attr");
  put(tmp.path / "A_A.txt", "1, 2\n2, 1\n");
  put(tmp.path / "A_graph_indicator.txt", "1\n1\n");
  put(tmp.path / "A_graph_labels.txt", "4\n");
  put(tmp.path / "A_node_attributes.txt", "0.5, 1.5\n2.5, 3.5\n");
  Dataset ds = read_tu_dataset(tmp.path, "A");
  CHECK(ds.feature_width == 2);
  CHECK(ds.graphs[0].node_features[1] == std::vector<double>{2.5, 3.5});
  CHECK(ds.graphs[0].graph_label == 0);  // single raw label remaps to class 0
}

TEST_CASE("unlabeled nodes default to constant features or degree one-hots") {
  TempDir tmp("tu_unlab");
  put(tmp.path / "U_A.txt", "1, 2\n2, 1\n2, 3\n3, 2\n");
  put(tmp.path / "U_graph_indicator.txt", "1\n1\n1\n");
  put(tmp.path / "U_graph_labels.txt", "7\n");
  Dataset plain = read_tu_dataset(tmp.path, "U");
  CHECK(plain.feature_width == 1);
  CHECK(plain.graphs[0].node_features[0] == std::vector<double>{1.0});

  TuReadOptions opt;
  opt.degree_one_hot_if_unlabeled = true;
  Dataset hot = read_tu_dataset(tmp.path, "U", opt);
  CHECK(hot.feature_width == 2);  // degrees {1, 2}
  CHECK(hot.graphs[0].node_features[0] == std::vector<double>{1.0, 0.0});
  CHECK(hot.graphs[0].node_features[1] == std::vector<double>{0.0, 1.0});
}

TEST_CASE("malformed inputs raise IngestError") {
  TempDir tmp("tu_bad");
  put(tmp.path / "B_A.txt", "1, 2\n2, 1\n");
  put(tmp.path / "B_graph_indicator.txt", "1\n2\n");  // edge crosses graphs
  put(tmp.path / "B_graph_labels.txt", "0\n0\n");
  CHECK_THROWS_AS(read_tu_dataset(tmp.path, "B"), IngestError);

  put(tmp.path / "C_A.txt", "1, 5\n5, 1\n");  // node 5 does not exist
  put(tmp.path / "C_graph_indicator.txt", "1\n1\n");
  put(tmp.path / "C_graph_labels.txt", "0\n");
  CHECK_THROWS_AS(read_tu_dataset(tmp.path, "C"), IngestError);

  CHECK_THROWS_AS(read_tu_dataset(tmp.path, "MISSING"), IngestError);

  put(tmp.path / "G_A.txt", "1, 2\n2, 1\n");
  put(tmp.path / "G_graph_indicator.txt", "2\n1\n");  // non-monotone indicator
  put(tmp.path / "G_graph_labels.txt", "0\n0\n");
  CHECK_THROWS_AS(read_tu_dataset(tmp.path, "G"), IngestError);
}

TEST_CASE("write/read round-trip preserves one-hot datasets exactly") {
  TempDir tmp("tu_rt");
  std::mt19937_64 rng(23);
  Dataset ds;
  ds.name = "RT";
  for (int i = 0; i < 8; ++i) {
    Graph g = random_graph(5 + static_cast<int>(rng() % 4), 0.4, 3, rng());
    g.graph_label = static_cast<int>(rng() % 2);
    ds.graphs.push_back(std::move(g));
  }
  ds.finalize();
  write_tu_dataset(ds, tmp.path);
  Dataset back = read_tu_dataset(tmp.path, "RT");
  REQUIRE(back.graphs.size() == ds.graphs.size());
  for (size_t i = 0; i < ds.graphs.size(); ++i) CHECK(back.graphs[i] == ds.graphs[i]);
}

TEST_CASE("write/read round-trip preserves attribute datasets") {
  TempDir tmp("tu_rt_attr");
  Dataset ds;
  ds.name = "RA";
  ds.graphs.push_back(
      Graph::make(2, {{0, 1}}, {{0.125, -3.5}, {1e-9, 42.0}}, 0));
  ds.graphs.push_back(Graph::make(1, {}, {{7.25, 0.0}}, 1));
  ds.finalize();
  write_tu_dataset(ds, tmp.path);
  Dataset back = read_tu_dataset(tmp.path, "RA");
  REQUIRE(back.graphs.size() == 2);
  for (size_t i = 0; i < ds.graphs.size(); ++i) CHECK(back.graphs[i] == ds.graphs[i]);
}
