// SPDX-License-Identifier: Apache-2.0

#include "ggospa/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ggospa/error.hpp"

namespace ggospa {

using nlohmann::json;

Graph parse_graph_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph JSON must be an object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError("graph JSON needs a \"nodes\" array");
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw ParseError("graph JSON needs an \"edges\" array");
  }

  std::vector<Attribute> nodes;
  for (const auto& node : doc["nodes"]) {
    if (!node.is_array()) throw ParseError("each node must be a numeric array");
    Attribute attr;
    for (const auto& v : node) {
      if (!v.is_number()) throw ParseError("node attributes must be numbers");
      attr.push_back(v.get<double>());
    }
    nodes.push_back(std::move(attr));
  }

  std::vector<Edge> edges;
  for (const auto& edge : doc["edges"]) {
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_integer() ||
        !edge[1].is_number_integer()) {
      throw ParseError("each edge must be a 2-element integer array");
    }
    const auto a = edge[0].get<long long>();
    const auto b = edge[1].get<long long>();
    if (a < 0 || b < 0) throw InvalidGraph("negative node index in edge");
    edges.emplace_back(static_cast<std::size_t>(a),
                       static_cast<std::size_t>(b));
  }
  return Graph(std::move(nodes), std::move(edges));
}

std::string write_graph_json(const Graph& g) {
  json nodes = json::array();
  for (const auto& attr : g.attributes()) nodes.push_back(attr);
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
  json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump();
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph_json(buffer.str());
}

namespace {

// Splits a line on commas and whitespace.
std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Non-empty lines of a file, tokenized. Returns nullopt when missing.
std::optional<std::vector<std::vector<std::string>>> read_rows(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto t = tokens(line);
    if (!t.empty()) rows.push_back(std::move(t));
  }
  return rows;
}

long long to_int(const std::string& s, const std::filesystem::path& file) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "' in " + file.string());
  }
}

double to_real(const std::string& s, const std::filesystem::path& file) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in " + file.string());
  }
}

}  // namespace

Dataset parse_tudataset(const std::filesystem::path& directory,
                        const std::string& dataset_name,
                        NodeFeatureSource source) {
  const auto file = [&](const char* suffix) {
    return directory / (dataset_name + "_" + suffix + ".txt");
  };
  const auto a_path = file("A");
  const auto indicator_path = file("graph_indicator");
  auto a_rows = read_rows(a_path);
  if (!a_rows) throw ParseError("missing mandatory file " + a_path.string());
  auto indicator_rows = read_rows(indicator_path);
  if (!indicator_rows) {
    throw ParseError("missing mandatory file " + indicator_path.string());
  }

  // Node -> (graph, local index).
  const std::size_t num_nodes = indicator_rows->size();
  std::vector<std::size_t> graph_of(num_nodes);
  std::vector<std::size_t> local_of(num_nodes);
  std::vector<std::size_t> graph_sizes;
  for (std::size_t v = 0; v < num_nodes; ++v) {
    const auto& row = (*indicator_rows)[v];
    if (row.size() != 1) {
      throw ParseError("expected one graph id per line in " +
                       indicator_path.string());
    }
    const long long id = to_int(row[0], indicator_path);
    if (id < 1) {
      throw ParseError("dangling graph id " + row[0] + " in " +
                       indicator_path.string());
    }
    const auto g = static_cast<std::size_t>(id - 1);
    if (g >= graph_sizes.size()) graph_sizes.resize(g + 1, 0);
    graph_of[v] = g;
    local_of[v] = graph_sizes[g]++;
  }
  const std::size_t num_graphs = graph_sizes.size();

  // Node features.
  std::vector<Attribute> features(num_nodes);
  auto attr_rows = source == NodeFeatureSource::automatic
                       ? read_rows(file("node_attributes"))
                       : std::nullopt;
  auto label_rows = read_rows(file("node_labels"));
  if (attr_rows) {
    if (attr_rows->size() != num_nodes) {
      throw ParseError("node attribute count does not match the indicator in " +
                       file("node_attributes").string());
    }
    for (std::size_t v = 0; v < num_nodes; ++v) {
      for (const auto& tok : (*attr_rows)[v]) {
        features[v].push_back(to_real(tok, file("node_attributes")));
      }
    }
  } else if (label_rows) {
    if (label_rows->size() != num_nodes) {
      throw ParseError("node label count does not match the indicator in " +
                       file("node_labels").string());
    }
    for (std::size_t v = 0; v < num_nodes; ++v) {
      features[v] = {static_cast<double>(
          to_int((*label_rows)[v].at(0), file("node_labels")))};
    }
  } else {
    for (auto& f : features) f = {0.0};
  }

  // Directed pairs; every (i, j) needs its (j, i).
  std::set<std::pair<std::size_t, std::size_t>> directed;
  for (const auto& row : *a_rows) {
    if (row.size() != 2) {
      throw ParseError("expected two node ids per line in " + a_path.string());
    }
    const long long i = to_int(row[0], a_path);
    const long long j = to_int(row[1], a_path);
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > num_nodes ||
        static_cast<std::size_t>(j) > num_nodes) {
      throw ParseError("dangling node id in edge (" + row[0] + "," + row[1] +
                       ") of " + a_path.string());
    }
    directed.emplace(static_cast<std::size_t>(i - 1),
                     static_cast<std::size_t>(j - 1));
  }
  std::vector<std::vector<Edge>> edges(num_graphs);
  for (const auto& [i, j] : directed) {
    if (!directed.contains({j, i})) {
      throw ParseError("asymmetric edge list: (" + std::to_string(i + 1) + "," +
                       std::to_string(j + 1) + ") has no reverse in " +
                       a_path.string());
    }
    if (graph_of[i] != graph_of[j]) {
      throw ParseError("edge (" + std::to_string(i + 1) + "," +
                       std::to_string(j + 1) + ") joins two graphs in " +
                       a_path.string());
    }
    if (i < j) edges[graph_of[i]].emplace_back(local_of[i], local_of[j]);
    if (i == j) edges[graph_of[i]].emplace_back(local_of[i], local_of[j]);
  }

  std::vector<std::vector<Attribute>> node_attrs(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    node_attrs[g].reserve(graph_sizes[g]);
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    node_attrs[graph_of[v]].push_back(std::move(features[v]));
  }

  Dataset ds;
  ds.name = dataset_name;
  ds.graphs.reserve(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    ds.graphs.emplace_back(std::move(node_attrs[g]), std::move(edges[g]));
  }

  const auto labels_path = file("graph_labels");
  if (auto rows = read_rows(labels_path)) {
    if (rows->size() != num_graphs) {
      throw ParseError("graph label count " + std::to_string(rows->size()) +
                       " does not match " + std::to_string(num_graphs) +
                       " graphs in " + labels_path.string());
    }
    for (const auto& row : *rows) {
      ds.labels.push_back(static_cast<int>(to_int(row.at(0), labels_path)));
    }
  } else {
    ds.labels.assign(num_graphs, 0);
  }
  return ds;
}

}  // namespace ggospa
