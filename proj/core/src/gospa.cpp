// SPDX-License-Identifier: Apache-2.0

#include "ggospa/gospa.hpp"

#include <cmath>
#include <limits>

#include "ggospa/error.hpp"

namespace ggospa {

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  if (cost.cols() != cost.rows()) {
    throw InvalidParams("assignment cost matrix must be square");
  }
  if (n == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Shortest augmenting path with potentials; index 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1),
                                static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

namespace {

// Optimal GOSPA objective restricted to the given node subsets.
double subset_optimum(const Eigen::MatrixXd& dp, double half,
                      const std::vector<std::size_t>& xs,
                      const std::vector<std::size_t>& ys) {
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  const std::size_t n = nx + ny;
  if (n == 0) return 0.0;
  double big = 1.0;
  for (auto i : xs) {
    for (auto j : ys) big += dp(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
  }
  big += 2.0 * half * static_cast<double>(n);
  Eigen::MatrixXd aug = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), big);
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      aug(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          dp(static_cast<Eigen::Index>(xs[a]), static_cast<Eigen::Index>(ys[b]));
    }
    aug(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(ny + a)) = half;
  }
  for (std::size_t b = 0; b < ny; ++b) {
    aug(static_cast<Eigen::Index>(nx + b), static_cast<Eigen::Index>(b)) = half;
    for (std::size_t a = 0; a < nx; ++a) {
      aug(static_cast<Eigen::Index>(nx + b), static_cast<Eigen::Index>(ny + a)) =
          0.0;
    }
  }
  const auto sol = solve_assignment(aug);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += aug(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(sol[r]));
  }
  return total;
}

}  // namespace

GospaResult gospa(std::span<const Attribute> vx, std::span<const Attribute> vy,
                  double c, double p, const BaseMetricSpec& spec) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParams("GOSPA requires c > 0");
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidParams("GOSPA requires 1 <= p < inf");
  }
  const BaseMetricSpec metric = spec.resolved(c);
  const std::size_t nx = vx.size();
  const std::size_t ny = vy.size();
  const double half = std::pow(c, p) / 2.0;

  Eigen::MatrixXd dp(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny));
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      dp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::pow(base_distance(vx[i], vy[j], metric), p);
    }
  }

  std::vector<std::size_t> all_x(nx), all_y(ny);
  for (std::size_t i = 0; i < nx; ++i) all_x[i] = i;
  for (std::size_t j = 0; j < ny; ++j) all_y[j] = j;
  const double optimum = subset_optimum(dp, half, all_x, all_y);
  const double tol = 1e-9 * std::max(1.0, optimum);

  // Grow the lexicographically smallest optimal pair list one pair at a
  // time, checking each candidate prefix against the optimum.
  GospaResult result;
  std::vector<bool> used(ny, false);
  std::size_t next_i = 0;
  double fixed = 0.0;
  for (;;) {
    std::vector<std::size_t> free_y;
    for (std::size_t j = 0; j < ny; ++j) {
      if (!used[j]) free_y.push_back(j);
    }
    const double stop = fixed + half * static_cast<double>((nx - next_i) +
                                                           free_y.size());
    if (stop <= optimum + tol) break;

    bool extended = false;
    for (std::size_t i = next_i; i < nx && !extended; ++i) {
      std::vector<std::size_t> rest_x;
      for (std::size_t k = i + 1; k < nx; ++k) rest_x.push_back(k);
      const double skipped = half * static_cast<double>(i - next_i);
      for (std::size_t j : free_y) {
        const double pair = dp(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(j));
        std::vector<std::size_t> rest_y;
        for (std::size_t k : free_y) {
          if (k != j) rest_y.push_back(k);
        }
        const double candidate =
            fixed + skipped + pair + subset_optimum(dp, half, rest_x, rest_y);
        if (candidate <= optimum + tol) {
          result.assignment.emplace_back(i, j);
          fixed += skipped + pair;
          used[j] = true;
          next_i = i + 1;
          extended = true;
          break;
        }
      }
    }
    if (!extended) throw SolverError("GOSPA tie-breaking lost the optimum");
  }

  double value_p = half * static_cast<double>(nx + ny - 2 * result.assignment.size());
  for (const auto& [i, j] : result.assignment) {
    value_p += dp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  result.value_p = value_p;
  result.value = std::pow(value_p, 1.0 / p);
  return result;
}

}  // namespace ggospa
