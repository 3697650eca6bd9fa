// SPDX-License-Identifier: Apache-2.0

#include "ggospa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ggospa/error.hpp"

namespace ggospa {

Graph::Graph(std::vector<Attribute> attributes, std::vector<Edge> edges)
    : attributes_(std::move(attributes)), edges_(std::move(edges)) {
  const std::size_t n = attributes_.size();
  if (n > 0) {
    const std::size_t dim = attributes_.front().size();
    for (std::size_t i = 1; i < n; ++i) {
      if (attributes_[i].size() != dim) {
        throw InvalidGraph("attribute dimension mismatch at node " +
                           std::to_string(i));
      }
    }
  }
  for (auto& [a, b] : edges_) {
    if (a >= n || b >= n) {
      throw InvalidGraph("edge {" + std::to_string(a) + "," +
                         std::to_string(b) + "} out of range for " +
                         std::to_string(n) + " nodes");
    }
    if (a == b) {
      throw InvalidGraph("self-loop at node " + std::to_string(a));
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InvalidGraph("duplicate edge {" + std::to_string(dup->first) + "," +
                       std::to_string(dup->second) + "}");
  }
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

Graph make_graph(std::vector<Attribute> attributes, std::vector<Edge> edges) {
  return Graph(std::move(attributes), std::move(edges));
}

AdjacencyMatrix adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  AdjacencyMatrix a = AdjacencyMatrix::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1;
  }
  return a;
}

BaseMetricSpec BaseMetricSpec::resolved(double c) const {
  BaseMetricSpec out = *this;
  if (kind == BaseMetricKind::discrete && !delta) out.delta = 2.0 * c;
  return out;
}

double base_distance(const Attribute& x, const Attribute& y,
                     const BaseMetricSpec& spec) {
  if (x.size() != y.size()) {
    throw InvalidGraph("attribute dimension mismatch: " +
                       std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()));
  }
  switch (spec.kind) {
    case BaseMetricKind::euclidean: {
      double sum = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        sum += d * d;
      }
      return std::sqrt(sum);
    }
    case BaseMetricKind::discrete:
      if (!spec.delta || !(*spec.delta > 0.0)) {
        throw InvalidParams("discrete base metric needs delta > 0");
      }
      return x == y ? 0.0 : *spec.delta;
  }
  return 0.0;
}

}  // namespace ggospa
