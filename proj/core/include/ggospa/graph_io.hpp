// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ggospa/graph.hpp"

namespace ggospa {

/// Graph classification corpus. graphs.size() == labels.size().
struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<int> labels;

  std::size_t size() const { return graphs.size(); }
};

/// Parses `{"nodes": [[...], ...], "edges": [[i, j], ...]}` (0-based,
/// unordered pairs). Throws ParseError for malformed JSON or schema
/// violations, InvalidGraph for graph invariant violations.
Graph parse_graph_json(std::string_view text);

/// Canonical form: edges sorted with i < j. Round-trips through
/// parse_graph_json.
std::string write_graph_json(const Graph& g);

Graph read_graph_file(const std::filesystem::path& path);

enum class NodeFeatureSource {
  automatic,  ///< attributes when DS_node_attributes.txt exists, else labels
  labels,     ///< force DS_node_labels.txt as 1-D codes
};

/// Loads a TUDataset directory (DS_A.txt, DS_graph_indicator.txt, and
/// optionally DS_graph_labels.txt, DS_node_attributes.txt,
/// DS_node_labels.txt). File ids are 1-based; the result is 0-based. Each
/// undirected edge must appear in both directions in DS_A.txt and is stored
/// once. Nodes without attributes or labels get the 1-D code 0.
Dataset parse_tudataset(const std::filesystem::path& directory,
                        const std::string& dataset_name,
                        NodeFeatureSource source = NodeFeatureSource::automatic);

}  // namespace ggospa
