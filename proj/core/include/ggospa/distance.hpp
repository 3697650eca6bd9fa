// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ggospa/graph.hpp"
#include "ggospa/lp.hpp"
#include "ggospa/lp_formulation.hpp"
#include "ggospa/params.hpp"

namespace ggospa {

struct DistanceOptions {
  std::size_t enumeration_limit = 8;
  LpOptions lp;
};

struct DistanceResult {
  double value = 0.0;
  MetricBreakdown breakdown;
  double binaryness = 0.0;
  LpStatus status = LpStatus::optimal;
};

/// Family distance with the chosen backend. Validates params first.
DistanceResult family_distance(const Graph& x, const Graph& y,
                               const FamilyParams& params, Backend backend,
                               const BaseMetricSpec& spec = {},
                               const DistanceOptions& options = {});

}  // namespace ggospa
