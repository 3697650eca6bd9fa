// SPDX-License-Identifier: Apache-2.0

#include "ggospa/params.hpp"

#include <cmath>
#include <sstream>

#include "ggospa/error.hpp"

namespace ggospa {

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::exact:
      return "exact";
    case Backend::integer:
      return "integer";
    case Backend::relaxed:
      return "relaxed";
  }
  return "?";
}

Backend backend_from_string(const std::string& name) {
  if (name == "exact") return Backend::exact;
  if (name == "integer") return Backend::integer;
  if (name == "relaxed") return Backend::relaxed;
  throw InvalidParams("unknown backend '" + name +
                      "' (expected exact, integer or relaxed)");
}

void validate(const FamilyParams& params, bool relaxed) {
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "invalid parameters (c=" << params.c << ", p=" << params.p
       << ", epsilon=" << params.epsilon << ", beta=" << params.beta
       << ", eta=" << params.eta << "): " << what;
    throw InvalidParams(os.str());
  };
  if (!(params.c > 0.0) || !std::isfinite(params.c)) fail("requires c > 0");
  if (!(params.p >= 1.0) || !std::isfinite(params.p)) {
    fail("requires 1 <= p < inf");
  }
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    fail("requires epsilon > 0");
  }
  if (params.gospa_compat) {
    if (!(params.beta >= 0.0)) {
      fail("requires 0 <= beta (graph GOSPA compatibility mode)");
    }
  } else if (!(params.beta > 0.0)) {
    fail("requires 0 < beta (use the graph GOSPA compatibility mode for "
         "beta = 0)");
  }
  if (!(params.beta <= params.eta)) fail("requires beta <= eta");
  if (!(params.eta <= 1.0)) fail("requires eta <= 1");
  if (relaxed && !(params.eta >= 0.5)) {
    fail("the relaxed LP requires eta >= 1/2");
  }
}

}  // namespace ggospa
