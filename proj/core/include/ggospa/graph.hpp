// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ggospa {

using Attribute = std::vector<double>;
using Edge = std::pair<std::size_t, std::size_t>;

/// Symmetric 0/1 matrix with zero diagonal.
using AdjacencyMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Undirected graph with real-vector node attributes.
///
/// Immutable once built. Edges are stored canonically: each pair has
/// first < second and the list is sorted.
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalizes. Throws InvalidGraph on a dimension
  /// mismatch, an out-of-range index, a self-loop or a duplicate edge.
  Graph(std::vector<Attribute> attributes, std::vector<Edge> edges);

  std::size_t num_nodes() const { return attributes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  /// Attribute dimension; 0 for the empty graph.
  std::size_t dimension() const {
    return attributes_.empty() ? 0 : attributes_.front().size();
  }

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute& attribute(std::size_t i) const { return attributes_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(std::size_t i, std::size_t j) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Attribute> attributes_;
  std::vector<Edge> edges_;
};

Graph make_graph(std::vector<Attribute> attributes, std::vector<Edge> edges);

AdjacencyMatrix adjacency(const Graph& g);

enum class BaseMetricKind { euclidean, discrete };

/// The metric d(.,.) on node attributes.
///
/// For the discrete kind the mismatch distance is `delta`; when left unset,
/// family computations resolve it to 2c so mismatched labels are never
/// assigned at the optimum.
struct BaseMetricSpec {
  BaseMetricKind kind = BaseMetricKind::euclidean;
  std::optional<double> delta;

  static BaseMetricSpec euclidean() { return {}; }
  static BaseMetricSpec discrete(std::optional<double> delta = std::nullopt) {
    return {BaseMetricKind::discrete, delta};
  }

  /// Copy with an unset discrete delta replaced by 2c.
  BaseMetricSpec resolved(double c) const;
};

/// Throws InvalidGraph on a dimension mismatch and InvalidParams on an
/// unresolved or non-positive discrete delta.
double base_distance(const Attribute& x, const Attribute& y,
                     const BaseMetricSpec& spec);

}  // namespace ggospa
