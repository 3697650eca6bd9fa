// SPDX-License-Identifier: Apache-2.0

#include "ggospa/distance.hpp"

#include "ggospa/metric_exact.hpp"

namespace ggospa {

DistanceResult family_distance(const Graph& x, const Graph& y,
                               const FamilyParams& params, Backend backend,
                               const BaseMetricSpec& spec,
                               const DistanceOptions& options) {
  validate(params, backend);
  DistanceResult out;
  if (backend == Backend::exact) {
    auto exact = family_distance_exact(x, y, params, spec, options.enumeration_limit);
    out.value = exact.value;
    out.breakdown = exact.breakdown;
    return out;
  }
  const auto mode = backend == Backend::integer ? Integrality::integer
                                                : Integrality::relaxed;
  auto lp = family_distance_lp(x, y, params, mode, spec, options.lp);
  out.value = lp.value;
  out.breakdown = lp.breakdown;
  out.binaryness = lp.binaryness;
  out.status = lp.status;
  return out;
}

}  // namespace ggospa
