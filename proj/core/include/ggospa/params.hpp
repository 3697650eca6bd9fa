// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace ggospa {

/// Hyperparameters of the graph GOSPA metric family.
///
/// Valid when c > 0, 1 <= p < inf, epsilon > 0 and 0 < beta <= eta <= 1.
/// With `gospa_compat` set, beta = 0 is admitted as well, which recovers
/// the graph GOSPA metric at eta = 1/2.
struct FamilyParams {
  double c = 3.0;
  double p = 1.0;
  double epsilon = 1.0;
  double beta = 0.3;
  double eta = 0.7;
  bool gospa_compat = false;

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

enum class Backend { exact, integer, relaxed };

const char* to_string(Backend backend);
Backend backend_from_string(const std::string& name);

/// Throws InvalidParams naming the violated constraint. The relaxed LP
/// additionally needs eta >= 1/2 for a nonnegative objective.
void validate(const FamilyParams& params, bool relaxed = false);

inline void validate(const FamilyParams& params, Backend backend) {
  validate(params, backend == Backend::relaxed);
}

/// The six-way cost split, each component to the p-th power, plus the
/// total after the 1/p root.
struct MetricBreakdown {
  double localisation_p = 0.0;
  double missed_p = 0.0;
  double false_p = 0.0;
  double assigned_edge_p = 0.0;
  double half_edge_p = 0.0;
  double unassigned_edge_p = 0.0;
  double total = 0.0;

  double sum_p() const {
    return localisation_p + missed_p + false_p + assigned_edge_p +
           half_edge_p + unassigned_edge_p;
  }
};

}  // namespace ggospa
