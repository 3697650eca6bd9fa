// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>

#include "ggospa/gospa.hpp"
#include "ggospa/graph.hpp"
#include "ggospa/params.hpp"

namespace ggospa {

inline constexpr std::size_t kDefaultEnumerationLimit = 8;

/// Number of partial matchings between n_x and n_y nodes:
/// sum_k C(n_x,k) C(n_y,k) k!.
std::size_t count_assignments(std::size_t n_x, std::size_t n_y);

/// Single-consumer stream over every assignment set between n_x and n_y
/// nodes, each produced exactly once.
class AssignmentEnumerator {
 public:
  /// Throws SizeGuardExceeded when n_x or n_y exceeds `limit`.
  AssignmentEnumerator(std::size_t n_x, std::size_t n_y,
                       std::size_t limit = kDefaultEnumerationLimit);

  /// Next assignment, or nullopt when exhausted.
  std::optional<AssignmentSet> next();

 private:
  bool advance();

  std::size_t n_x_;
  std::size_t n_y_;
  // choice_[i] in [0, n_y] where n_y means "unassigned".
  std::vector<std::size_t> choice_;
  std::vector<bool> used_;
  bool started_ = false;
  bool done_ = false;
};

struct EdgeCounts {
  std::size_t assigned_mismatch = 0;
  std::size_t half_assigned = 0;
  std::size_t unassigned = 0;

  friend bool operator==(const EdgeCounts&, const EdgeCounts&) = default;
};

struct EdgeCost {
  double e_p = 0.0;
  EdgeCounts counts;
};

/// Set-form edge mismatch cost of an assignment:
/// eps^p (#assigned mismatches + eta #half-assigned + beta #unassigned).
EdgeCost edge_mismatch_cost(const AssignmentSet& gamma,
                            const AdjacencyMatrix& ax,
                            const AdjacencyMatrix& ay,
                            const FamilyParams& params);

/// Cost split of a fixed assignment, with X as ground truth (unassigned X
/// nodes are missed, unassigned Y nodes are false).
MetricBreakdown decompose(const AssignmentSet& gamma, const Graph& x,
                          const Graph& y, const FamilyParams& params,
                          const BaseMetricSpec& spec);

struct ExactResult {
  double value = 0.0;
  AssignmentSet assignment;
  MetricBreakdown breakdown;
};

/// Family distance by exhaustive enumeration of assignment sets. Ties are
/// broken towards the lexicographically smallest pair list.
ExactResult family_distance_exact(const Graph& x, const Graph& y,
                                  const FamilyParams& params,
                                  const BaseMetricSpec& spec,
                                  std::size_t limit = kDefaultEnumerationLimit);

}  // namespace ggospa
