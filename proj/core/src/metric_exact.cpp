// SPDX-License-Identifier: Apache-2.0

#include "ggospa/metric_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ggospa/error.hpp"

namespace ggospa {

std::size_t count_assignments(std::size_t n_x, std::size_t n_y) {
  // sum_k C(n_x,k) C(n_y,k) k!  =  sum_k C(n_x,k) * n_y! / (n_y-k)!
  std::size_t total = 0;
  std::size_t choose_x = 1;  // C(n_x, k)
  std::size_t falling_y = 1;  // n_y (n_y-1) ... (n_y-k+1)
  for (std::size_t k = 0; k <= std::min(n_x, n_y); ++k) {
    total += choose_x * falling_y;
    choose_x = choose_x * (n_x - k) / (k + 1);
    falling_y *= (n_y - k);
  }
  return total;
}

AssignmentEnumerator::AssignmentEnumerator(std::size_t n_x, std::size_t n_y,
                                           std::size_t limit)
    : n_x_(n_x), n_y_(n_y), choice_(n_x, n_y), used_(n_y, false) {
  if (n_x > limit || n_y > limit) {
    throw SizeGuardExceeded("enumeration limited to " + std::to_string(limit) +
                            " nodes per graph, got " + std::to_string(n_x) +
                            " and " + std::to_string(n_y));
  }
}

bool AssignmentEnumerator::advance() {
  // Odometer over positions; each digit runs unassigned, then the free y's.
  for (std::size_t pos = n_x_; pos-- > 0;) {
    std::size_t start = 0;
    if (choice_[pos] < n_y_) {
      used_[choice_[pos]] = false;
      start = choice_[pos] + 1;
    }
    std::size_t j = start;
    while (j < n_y_ && used_[j]) ++j;
    if (j < n_y_) {
      choice_[pos] = j;
      used_[j] = true;
      return true;
    }
    choice_[pos] = n_y_;
  }
  return false;
}

std::optional<AssignmentSet> AssignmentEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
  } else if (!advance()) {
    done_ = true;
    return std::nullopt;
  }
  AssignmentSet gamma;
  for (std::size_t i = 0; i < n_x_; ++i) {
    if (choice_[i] < n_y_) gamma.emplace_back(i, choice_[i]);
  }
  return gamma;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

void check_assignment(const AssignmentSet& gamma, std::size_t n_x,
                      std::size_t n_y, std::vector<std::size_t>& map_x,
                      std::vector<std::size_t>& map_y) {
  map_x.assign(n_x, kNone);
  map_y.assign(n_y, kNone);
  for (const auto& [i, j] : gamma) {
    if (i >= n_x || j >= n_y) {
      throw InvalidParams("assignment pair (" + std::to_string(i) + "," +
                          std::to_string(j) + ") out of range");
    }
    if (map_x[i] != kNone || map_y[j] != kNone) {
      throw InvalidParams("assignment is not one-to-one");
    }
    map_x[i] = j;
    map_y[j] = i;
  }
}

// Counts for a fixed mapping; map_x[i] / map_y[j] are partners or kNone.
EdgeCounts count_edges(const AdjacencyMatrix& ax, const AdjacencyMatrix& ay,
                       const std::vector<std::size_t>& map_x,
                       const std::vector<std::size_t>& map_y) {
  EdgeCounts counts;
  const auto nx = static_cast<std::size_t>(ax.rows());
  const auto ny = static_cast<std::size_t>(ay.rows());
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = a + 1; b < nx; ++b) {
      if (ax(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == 0) {
        continue;
      }
      const bool sa = map_x[a] != kNone;
      const bool sb = map_x[b] != kNone;
      if (sa && sb) {
        if (ay(static_cast<Eigen::Index>(map_x[a]),
               static_cast<Eigen::Index>(map_x[b])) == 0) {
          ++counts.assigned_mismatch;
        }
      } else if (sa || sb) {
        ++counts.half_assigned;
      } else {
        ++counts.unassigned;
      }
    }
  }
  for (std::size_t a = 0; a < ny; ++a) {
    for (std::size_t b = a + 1; b < ny; ++b) {
      if (ay(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == 0) {
        continue;
      }
      const bool sa = map_y[a] != kNone;
      const bool sb = map_y[b] != kNone;
      if (sa && sb) {
        if (ax(static_cast<Eigen::Index>(map_y[a]),
               static_cast<Eigen::Index>(map_y[b])) == 0) {
          ++counts.assigned_mismatch;
        }
      } else if (sa || sb) {
        ++counts.half_assigned;
      } else {
        ++counts.unassigned;
      }
    }
  }
  return counts;
}

struct EdgeWeights {
  double assigned;
  double half;
  double unassigned;
};

EdgeWeights edge_weights(const FamilyParams& params) {
  const double ep = std::pow(params.epsilon, params.p);
  return {ep, params.eta * ep, params.beta * ep};
}

}  // namespace

EdgeCost edge_mismatch_cost(const AssignmentSet& gamma,
                            const AdjacencyMatrix& ax,
                            const AdjacencyMatrix& ay,
                            const FamilyParams& params) {
  std::vector<std::size_t> map_x, map_y;
  check_assignment(gamma, static_cast<std::size_t>(ax.rows()),
                   static_cast<std::size_t>(ay.rows()), map_x, map_y);
  EdgeCost out;
  out.counts = count_edges(ax, ay, map_x, map_y);
  const auto w = edge_weights(params);
  out.e_p = w.assigned * static_cast<double>(out.counts.assigned_mismatch) +
            w.half * static_cast<double>(out.counts.half_assigned) +
            w.unassigned * static_cast<double>(out.counts.unassigned);
  return out;
}

MetricBreakdown decompose(const AssignmentSet& gamma, const Graph& x,
                          const Graph& y, const FamilyParams& params,
                          const BaseMetricSpec& spec) {
  const BaseMetricSpec metric = spec.resolved(params.c);
  const double half = std::pow(params.c, params.p) / 2.0;
  const auto ax = adjacency(x);
  const auto ay = adjacency(y);
  const auto edge = edge_mismatch_cost(gamma, ax, ay, params);
  const auto w = edge_weights(params);

  MetricBreakdown b;
  for (const auto& [i, j] : gamma) {
    b.localisation_p +=
        std::pow(base_distance(x.attribute(i), y.attribute(j), metric), params.p);
  }
  b.missed_p = half * static_cast<double>(x.num_nodes() - gamma.size());
  b.false_p = half * static_cast<double>(y.num_nodes() - gamma.size());
  b.assigned_edge_p = w.assigned * static_cast<double>(edge.counts.assigned_mismatch);
  b.half_edge_p = w.half * static_cast<double>(edge.counts.half_assigned);
  b.unassigned_edge_p = w.unassigned * static_cast<double>(edge.counts.unassigned);
  b.total = std::pow(b.sum_p(), 1.0 / params.p);
  return b;
}

ExactResult family_distance_exact(const Graph& x, const Graph& y,
                                  const FamilyParams& params,
                                  const BaseMetricSpec& spec,
                                  std::size_t limit) {
  validate(params);
  const std::size_t nx = x.num_nodes();
  const std::size_t ny = y.num_nodes();
  AssignmentEnumerator enumerator(nx, ny, limit);

  const BaseMetricSpec metric = spec.resolved(params.c);
  const double half = std::pow(params.c, params.p) / 2.0;
  std::vector<double> dp(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      dp[i * ny + j] =
          std::pow(base_distance(x.attribute(i), y.attribute(j), metric), params.p);
    }
  }
  const auto ax = adjacency(x);
  const auto ay = adjacency(y);
  const auto w = edge_weights(params);

  std::vector<std::size_t> map_x, map_y;
  double best = std::numeric_limits<double>::infinity();
  AssignmentSet best_gamma;
  while (auto gamma = enumerator.next()) {
    check_assignment(*gamma, nx, ny, map_x, map_y);
    double cost = half * static_cast<double>(nx + ny - 2 * gamma->size());
    for (const auto& [i, j] : *gamma) cost += dp[i * ny + j];
    const auto counts = count_edges(ax, ay, map_x, map_y);
    cost += w.assigned * static_cast<double>(counts.assigned_mismatch) +
            w.half * static_cast<double>(counts.half_assigned) +
            w.unassigned * static_cast<double>(counts.unassigned);
    const double tie = std::isfinite(best) ? 1e-12 * std::max(1.0, best) : 0.0;
    if (cost < best - tie) {
      best = cost;
      best_gamma = std::move(*gamma);
    } else if (cost <= best + tie && *gamma < best_gamma) {
      best_gamma = std::move(*gamma);
    }
  }

  ExactResult result;
  result.assignment = std::move(best_gamma);
  result.breakdown = decompose(result.assignment, x, y, params, spec);
  result.value = result.breakdown.total;
  return result;
}

}  // namespace ggospa
