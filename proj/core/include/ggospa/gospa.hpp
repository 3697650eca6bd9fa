// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ggospa/graph.hpp"

namespace ggospa {

/// Partial one-to-one matching between node indices, sorted by first index.
using AssignmentSet = std::vector<std::pair<std::size_t, std::size_t>>;

/// Minimum-cost perfect assignment on a square cost matrix. Returns the
/// column assigned to each row. All entries must be finite.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

struct GospaResult {
  double value = 0.0;    ///< value_p^(1/p)
  double value_p = 0.0;  ///< the minimized bracketed sum
  AssignmentSet assignment;
};

/// Node-set GOSPA (alpha = 2): localisation cost d^p for assigned pairs plus
/// c^p/2 per unassigned node. Among optimal assignments the
/// lexicographically smallest pair list is returned.
GospaResult gospa(std::span<const Attribute> vx, std::span<const Attribute> vy,
                  double c, double p, const BaseMetricSpec& spec);

}  // namespace ggospa
