// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace ggospa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { less_equal, equal, greater_equal };

struct LinearConstraint {
  std::vector<std::pair<std::size_t, double>> terms;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// min c^T x  s.t.  rows, lower <= x <= upper, x_j integer where masked.
class LinearProgram {
 public:
  std::size_t add_variable(std::string name, double lower, double upper,
                           double cost = 0.0, bool integer = false);
  void add_constraint(LinearConstraint constraint);
  void add_constraint(std::vector<std::pair<std::size_t, double>> terms,
                      Relation relation, double rhs);

  std::size_t num_variables() const { return cost_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<bool>& integer() const { return integer_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }

  void set_cost(std::size_t j, double value) { cost_[j] = value; }

  double objective(const std::vector<double>& x) const;
  /// Largest violation of any row or bound at x.
  double max_violation(const std::vector<double>& x) const;

  /// CPLEX LP text format, for cross-checking with external solvers.
  std::string to_lp_format() const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> integer_;
  std::vector<std::string> names_;
  std::vector<LinearConstraint> constraints_;
};

enum class LpStatus { optimal, infeasible, unbounded, limit_reached };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t nodes = 0;
};

struct SimplexOptions {
  /// 0 picks a limit proportional to the problem size.
  std::size_t iteration_limit = 0;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degeneracy_threshold = 50;
  /// Pivots between refactorizations; 0 picks max(100, rows / 2).
  std::size_t refactor_interval = 0;
  /// Relative size of the random outward shift applied to inequality
  /// slack bounds against degeneracy; removed again before returning.
  /// 0 disables it.
  double perturbation = 1e-6;
};

/// Bounded-variable revised simplex (dense basis inverse, two phases).
/// Dantzig pricing, Bland's rule after a run of degenerate pivots. Runs on
/// perturbed slack bounds, then restores them and repairs feasibility with
/// dual simplex pivots.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Same as solve_lp but with the variable bounds replaced.
LpSolution solve_lp(const LinearProgram& lp, const std::vector<double>& lower,
                    const std::vector<double>& upper,
                    const SimplexOptions& options = {});

struct BranchAndBoundLimits {
  std::size_t max_nodes = 100000;
  /// Wall-clock budget in seconds; <= 0 disables it.
  double time_limit = 0.0;
  double integrality_tol = 1e-6;
  SimplexOptions simplex;
};

/// Depth-first branch-and-bound over the integrality mask. Branches on the
/// most fractional masked variable and prunes on the incumbent. Returns
/// limit_reached with the best incumbent when the budget runs out; throws
/// SolverError if the budget runs out before any incumbent is found.
LpSolution solve_ilp(const LinearProgram& lp,
                     const BranchAndBoundLimits& limits = {});

}  // namespace ggospa
