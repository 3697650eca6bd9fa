// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "ggospa/gospa.hpp"
#include "ggospa/graph.hpp"
#include "ggospa/lp.hpp"
#include "ggospa/params.hpp"

namespace ggospa {

/// (n_X+1) x (n_Y+1) localisation / unassignment cost matrix D_{X,Y}.
Eigen::MatrixXd build_cost_matrix(const Graph& x, const Graph& y,
                                  const FamilyParams& params,
                                  const BaseMetricSpec& spec);

/// Column offsets of each block inside the family program.
///
/// Ordering is fixed: W row-major without the corner entry, then H
/// row-major, then e_hat, then q (unassignment column of W first, then the
/// unassignment row).
struct FamilyLayout {
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::size_t h_offset = 0;
  std::size_t e_hat = 0;
  std::size_t q_offset = 0;

  std::size_t w_count() const { return (n_x + 1) * (n_y + 1) - 1; }
  std::size_t h_count() const { return n_x * n_y; }
  std::size_t q_count() const { return n_x + n_y; }
  /// Column of W(i, j); (n_x, n_y) is not a variable.
  std::size_t w(std::size_t i, std::size_t j) const {
    return i * (n_y + 1) + j;
  }
  std::size_t h(std::size_t i, std::size_t j) const {
    return h_offset + i * n_y + j;
  }
  std::size_t q(std::size_t i) const { return q_offset + i; }
  /// Column of the k-th entry of the unassignment vector x.
  std::size_t x(std::size_t k) const {
    return k < n_x ? w(k, n_y) : w(n_x, k - n_x);
  }
};

struct FamilyProgram {
  LinearProgram lp;
  FamilyLayout layout;
};

enum class Integrality { integer, relaxed };

/// Glover-linearized program of the family objective. Relaxed mode drops
/// integrality and the upper bound on W and needs eta >= 1/2.
FamilyProgram build_family_program(const Graph& x, const Graph& y,
                                   const FamilyParams& params,
                                   Integrality integrality,
                                   const BaseMetricSpec& spec = {});

/// Matrix-form edge cost, evaluated literally for any W satisfying the
/// row/column constraints (fractional allowed). Throws InvalidParams when W
/// has the wrong shape and SolverError when its constraints are violated
/// by more than `tol`.
double edge_cost_matrix_form(const Eigen::MatrixXd& w, const AdjacencyMatrix& ax,
                             const AdjacencyMatrix& ay,
                             const FamilyParams& params, double tol = 1e-6);

/// Max entry-wise distance of W to {0, 1}.
double binaryness(const Eigen::MatrixXd& w);

/// Assignment set encoded by a binary W (entries rounded at 1/2).
AssignmentSet assignment_from_matrix(const Eigen::MatrixXd& w);
Eigen::MatrixXd matrix_from_assignment(const AssignmentSet& gamma,
                                       std::size_t n_x, std::size_t n_y);

struct LpResult {
  double value = 0.0;
  Eigen::MatrixXd w;
  MetricBreakdown breakdown;
  double binaryness = 0.0;
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;  ///< raw LP objective (value^p)
  std::size_t iterations = 0;
  std::size_t nodes = 0;
};

struct LpOptions {
  BranchAndBoundLimits limits;
};

/// Family distance through the linear program. Integer mode returns a
/// binary W with the exact family value (status limit_reached if the
/// node budget ran out first). Relaxed mode returns a lower bound.
LpResult family_distance_lp(const Graph& x, const Graph& y,
                            const FamilyParams& params, Integrality mode,
                            const BaseMetricSpec& spec = {},
                            const LpOptions& options = {});

}  // namespace ggospa
