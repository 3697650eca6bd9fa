// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <vector>

#include "ggospa/error.hpp"
#include "ggospa/lp.hpp"

namespace ggospa {

namespace {

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
};

}  // namespace

LpSolution solve_ilp(const LinearProgram& lp, const BranchAndBoundLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const auto out_of_time = [&] {
    if (limits.time_limit <= 0.0) return false;
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    return elapsed.count() > limits.time_limit;
  };

  const auto& mask = lp.integer();
  LpSolution best;
  best.status = LpStatus::infeasible;
  bool have_incumbent = false;
  double incumbent = kInf;
  std::size_t nodes = 0;
  std::size_t iterations = 0;
  bool exhausted = false;

  std::vector<Node> stack;
  stack.push_back({lp.lower(), lp.upper()});
  while (!stack.empty()) {
    if (nodes >= limits.max_nodes || out_of_time()) {
      exhausted = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;

    LpSolution relax = solve_lp(lp, node.lower, node.upper, limits.simplex);
    iterations += relax.iterations;
    if (relax.status == LpStatus::infeasible) continue;
    if (relax.status == LpStatus::unbounded) {
      best.status = LpStatus::unbounded;
      best.nodes = nodes;
      best.iterations = iterations;
      return best;
    }
    if (relax.status == LpStatus::limit_reached) {
      throw SolverError("simplex iteration limit reached inside branch-and-bound");
    }
    const double prune_tol = 1e-9 * std::max(1.0, std::abs(incumbent));
    if (have_incumbent && relax.objective >= incumbent - prune_tol) continue;

    // Most fractional masked variable; lowest index on ties.
    std::size_t branch = mask.size();
    double worst = limits.integrality_tol;
    for (std::size_t j = 0; j < mask.size(); ++j) {
      if (!mask[j]) continue;
      const double v = relax.values[j];
      const double frac = std::abs(v - std::round(v));
      if (frac > worst) {
        worst = frac;
        branch = j;
      }
    }

    if (branch == mask.size()) {
      for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) relax.values[j] = std::round(relax.values[j]);
      }
      incumbent = relax.objective;
      best = std::move(relax);
      have_incumbent = true;
      continue;
    }

    // Depth-first; the child on the rounded side is explored first.
    const double v = relax.values[branch];
    Node down = node;
    down.upper[branch] = std::floor(v);
    Node up = std::move(node);
    up.lower[branch] = std::ceil(v);
    if (v - std::floor(v) >= 0.5) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }

  if (!have_incumbent) {
    if (exhausted) {
      throw SolverError("branch-and-bound budget exhausted without an incumbent");
    }
    best.status = LpStatus::infeasible;
  } else {
    best.status = exhausted ? LpStatus::limit_reached : LpStatus::optimal;
  }
  best.nodes = nodes;
  best.iterations = iterations;
  return best;
}

}  // namespace ggospa
