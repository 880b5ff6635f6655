#pragma once

#include "tlgnn/graph.hpp"

#include <filesystem>
#include <string>

namespace tlgnn {

struct TuReadOptions {
  // When the dataset has no node labels/attributes, encode each node's degree
  // as a one-hot over the degrees present instead of a constant feature.
  bool degree_one_hot_if_unlabeled = false;
};

// Reads the common text benchmark layout: NAME_A.txt (1-based "i, j" arcs),
// NAME_graph_indicator.txt, NAME_graph_labels.txt and optionally
// NAME_node_labels.txt / NAME_node_attributes.txt. Node ids are converted to
// 0-based local indices here and nowhere else. Graph labels are remapped to
// contiguous 0-based classes in sorted order of the raw values.
Dataset read_tu_dataset(const std::filesystem::path& dir, const std::string& name,
                        const TuReadOptions& options = {});

// Inverse of read_tu_dataset for datasets produced by this project: one-hot
// feature rows become NAME_node_labels.txt, constant width-1 rows are omitted,
// anything else goes to NAME_node_attributes.txt verbatim.
void write_tu_dataset(const Dataset& ds, const std::filesystem::path& dir);

}  // namespace tlgnn
