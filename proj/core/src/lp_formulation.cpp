// SPDX-License-Identifier: Apache-2.0

#include "ggospa/lp_formulation.hpp"

#include <cmath>
#include <string>

#include "ggospa/error.hpp"
#include "ggospa/metric_exact.hpp"

namespace ggospa {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<std::size_t> degrees(const AdjacencyMatrix& a) {
  std::vector<std::size_t> deg(static_cast<std::size_t>(a.rows()), 0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    deg[static_cast<std::size_t>(i)] = static_cast<std::size_t>(a.row(i).sum());
  }
  return deg;
}

std::vector<std::vector<std::size_t>> neighbours(const AdjacencyMatrix& a) {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0) out[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd build_cost_matrix(const Graph& x, const Graph& y,
                                  const FamilyParams& params,
                                  const BaseMetricSpec& spec) {
  validate(params);
  const BaseMetricSpec metric = spec.resolved(params.c);
  const std::size_t nx = x.num_nodes();
  const std::size_t ny = y.num_nodes();
  const double half = std::pow(params.c, params.p) / 2.0;
  Eigen::MatrixXd d(idx(nx + 1), idx(ny + 1));
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      d(idx(i), idx(j)) =
          std::pow(base_distance(x.attribute(i), y.attribute(j), metric), params.p);
    }
    d(idx(i), idx(ny)) = half;
  }
  for (std::size_t j = 0; j < ny; ++j) d(idx(nx), idx(j)) = half;
  d(idx(nx), idx(ny)) = 0.0;
  return d;
}

FamilyProgram build_family_program(const Graph& x, const Graph& y,
                                   const FamilyParams& params,
                                   Integrality integrality,
                                   const BaseMetricSpec& spec) {
  const bool relaxed = integrality == Integrality::relaxed;
  validate(params, relaxed);
  const Eigen::MatrixXd d = build_cost_matrix(x, y, params, spec);
  const AdjacencyMatrix ax = adjacency(x);
  const AdjacencyMatrix ay = adjacency(y);
  const std::size_t nx = x.num_nodes();
  const std::size_t ny = y.num_nodes();
  const double ep = std::pow(params.epsilon, params.p);

  FamilyProgram prog;
  FamilyLayout& lay = prog.layout;
  lay.n_x = nx;
  lay.n_y = ny;
  LinearProgram& lp = prog.lp;

  // l = [A_X 1 ; A_Y^T 1]: node degrees, aligned with the x alias of W.
  const auto deg_x = degrees(ax);
  const auto deg_y = degrees(ay);
  const double w_upper = relaxed ? kInf : 1.0;
  const bool w_integer = !relaxed;
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      if (i == nx && j == ny) continue;
      double cost = d(idx(i), idx(j));
      if (i < nx && j == ny) cost += (params.eta - 0.5) * ep * static_cast<double>(deg_x[i]);
      if (i == nx && j < ny) cost += (params.eta - 0.5) * ep * static_cast<double>(deg_y[j]);
      lp.add_variable("W_" + std::to_string(i) + "_" + std::to_string(j), 0.0,
                      w_upper, cost, w_integer);
    }
  }
  lay.h_offset = lp.num_variables();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      lp.add_variable("H_" + std::to_string(i) + "_" + std::to_string(j), -kInf,
                      kInf, 0.0);
    }
  }
  lay.e_hat = lp.add_variable("e_hat", -kInf, kInf, ep / 2.0);
  lay.q_offset = lp.num_variables();
  const double q_cost = (params.beta / 2.0 - params.eta + 0.5) * ep;
  for (std::size_t k = 0; k < nx + ny; ++k) {
    lp.add_variable("q_" + std::to_string(k), -kInf, kInf, q_cost);
  }

  // Row and column sums of W.
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t j = 0; j <= ny; ++j) terms.emplace_back(lay.w(i, j), 1.0);
    lp.add_constraint(std::move(terms), Relation::equal, 1.0);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t i = 0; i <= nx; ++i) terms.emplace_back(lay.w(i, j), 1.0);
    lp.add_constraint(std::move(terms), Relation::equal, 1.0);
  }

  // H(i,j) >= +-(A_X W - W A_Y)(i,j)
  const auto nbr_x = neighbours(ax);
  const auto nbr_y = neighbours(ay);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (const double sign : {1.0, -1.0}) {
        std::vector<std::pair<std::size_t, double>> terms;
        terms.emplace_back(lay.h(i, j), 1.0);
        for (std::size_t k : nbr_x[i]) terms.emplace_back(lay.w(k, j), -sign);
        for (std::size_t k : nbr_y[j]) terms.emplace_back(lay.w(i, k), sign);
        lp.add_constraint(std::move(terms), Relation::greater_equal, 0.0);
      }
    }
  }

  // e_hat >= sum H
  {
    std::vector<std::pair<std::size_t, double>> terms;
    terms.emplace_back(lay.e_hat, 1.0);
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) terms.emplace_back(lay.h(i, j), -1.0);
    }
    lp.add_constraint(std::move(terms), Relation::greater_equal, 0.0);
  }

  // Glover bounds for q(k) = x(k) * sum_k' Q(k,k') x(k'), Q = diag(A_X, A_Y).
  for (std::size_t k = 0; k < nx + ny; ++k) {
    std::vector<std::size_t> row;  // indices k' with Q(k,k') = 1
    if (k < nx) {
      row = nbr_x[k];
    } else {
      for (std::size_t v : nbr_y[k - nx]) row.push_back(nx + v);
    }
    // Entries of Q are 0/1, so Q^- = 0 and Q^+ is the row count.
    const double q_plus = static_cast<double>(row.size());
    const double q_minus = 0.0;
    const std::size_t xk = lay.x(k);
    const std::size_t qk = lay.q(k);

    lp.add_constraint({{qk, 1.0}, {xk, -q_plus}}, Relation::less_equal, 0.0);
    lp.add_constraint({{qk, 1.0}, {xk, -q_minus}}, Relation::greater_equal, 0.0);

    std::vector<std::pair<std::size_t, double>> upper_terms{{qk, 1.0}};
    std::vector<std::pair<std::size_t, double>> lower_terms{{qk, 1.0}};
    for (std::size_t kk : row) {
      upper_terms.emplace_back(lay.x(kk), -1.0);
      lower_terms.emplace_back(lay.x(kk), -1.0);
    }
    if (q_minus != 0.0) upper_terms.emplace_back(xk, -q_minus);
    lower_terms.emplace_back(xk, -q_plus);
    lp.add_constraint(std::move(upper_terms), Relation::less_equal, -q_minus);
    lp.add_constraint(std::move(lower_terms), Relation::greater_equal, -q_plus);
  }

  return prog;
}

double edge_cost_matrix_form(const Eigen::MatrixXd& w, const AdjacencyMatrix& ax,
                             const AdjacencyMatrix& ay,
                             const FamilyParams& params, double tol) {
  const Eigen::Index nx = ax.rows();
  const Eigen::Index ny = ay.rows();
  if (w.rows() != nx + 1 || w.cols() != ny + 1) {
    throw InvalidParams("assignment matrix must be (n_X+1) x (n_Y+1)");
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    if (std::abs(w.row(i).sum() - 1.0) > tol) {
      throw SolverError("assignment matrix row " + std::to_string(i) +
                        " does not sum to 1");
    }
  }
  for (Eigen::Index j = 0; j < ny; ++j) {
    if (std::abs(w.col(j).sum() - 1.0) > tol) {
      throw SolverError("assignment matrix column " + std::to_string(j) +
                        " does not sum to 1");
    }
  }
  if (std::abs(w(nx, ny)) > tol || w.minCoeff() < -tol) {
    throw SolverError("assignment matrix has a nonzero corner or a negative entry");
  }

  const double ep = std::pow(params.epsilon, params.p);
  const Eigen::MatrixXd a_x = ax.cast<double>();
  const Eigen::MatrixXd a_y = ay.cast<double>();
  const Eigen::MatrixXd core = w.topLeftCorner(nx, ny);
  const Eigen::VectorXd u = w.col(ny).head(nx);
  const Eigen::RowVectorXd v = w.row(nx).head(ny);

  const double mismatch = (a_x * core - core * a_y).cwiseAbs().sum();
  const double unassigned = u.dot(a_x * u) + v.dot(v * a_y);
  const Eigen::VectorXd ones_x = Eigen::VectorXd::Ones(nx);
  const Eigen::RowVectorXd ones_y = Eigen::RowVectorXd::Ones(ny);
  const double half = u.dot(a_x * (ones_x - u)) + (ones_y - v).dot(v * a_y);
  return ep / 2.0 * mismatch + params.beta / 2.0 * ep * unassigned +
         (params.eta - 0.5) * ep * half;
}

double binaryness(const Eigen::MatrixXd& w) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const double v = w(i, j);
      worst = std::max(worst, std::min(std::abs(v), std::abs(1.0 - v)));
    }
  }
  return worst;
}

AssignmentSet assignment_from_matrix(const Eigen::MatrixXd& w) {
  AssignmentSet gamma;
  for (Eigen::Index i = 0; i + 1 < w.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < w.cols(); ++j) {
      if (w(i, j) >= 0.5) {
        gamma.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
  return gamma;
}

Eigen::MatrixXd matrix_from_assignment(const AssignmentSet& gamma,
                                       std::size_t n_x, std::size_t n_y) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(idx(n_x + 1), idx(n_y + 1));
  std::vector<bool> row_used(n_x, false), col_used(n_y, false);
  for (const auto& [i, j] : gamma) {
    if (i >= n_x || j >= n_y || row_used[i] || col_used[j]) {
      throw InvalidParams("assignment is not a valid one-to-one set");
    }
    w(idx(i), idx(j)) = 1.0;
    row_used[i] = true;
    col_used[j] = true;
  }
  for (std::size_t i = 0; i < n_x; ++i) {
    if (!row_used[i]) w(idx(i), idx(n_y)) = 1.0;
  }
  for (std::size_t j = 0; j < n_y; ++j) {
    if (!col_used[j]) w(idx(n_x), idx(j)) = 1.0;
  }
  return w;
}

LpResult family_distance_lp(const Graph& x, const Graph& y,
                            const FamilyParams& params, Integrality mode,
                            const BaseMetricSpec& spec, const LpOptions& options) {
  const FamilyProgram prog = build_family_program(x, y, params, mode, spec);
  const FamilyLayout& lay = prog.layout;
  const LpSolution sol = mode == Integrality::integer
                             ? solve_ilp(prog.lp, options.limits)
                             : solve_lp(prog.lp, options.limits.simplex);
  if (sol.status == LpStatus::infeasible || sol.status == LpStatus::unbounded) {
    throw SolverError(std::string("internal error: family program reported ") +
                      to_string(sol.status));
  }
  if (sol.values.empty() && prog.lp.num_variables() > 0) {
    throw SolverError("LP solver returned no solution");
  }

  const std::size_t nx = lay.n_x;
  const std::size_t ny = lay.n_y;
  LpResult out;
  out.status = sol.status;
  out.objective = sol.objective;
  out.iterations = sol.iterations;
  out.nodes = sol.nodes;
  out.w = Eigen::MatrixXd::Zero(idx(nx + 1), idx(ny + 1));
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      if (i == nx && j == ny) continue;
      out.w(idx(i), idx(j)) = sol.values[lay.w(i, j)];
    }
  }
  out.binaryness = binaryness(out.w);

  if (mode == Integrality::integer) {
    out.w = out.w.array().round();
    const AssignmentSet gamma = assignment_from_matrix(out.w);
    out.breakdown = decompose(gamma, x, y, params, spec);
    out.value = out.breakdown.total;
    return out;
  }

  // Relaxed: edge components come from the linearization variables so that
  // the six components add up to the LP objective.
  const Eigen::MatrixXd d = build_cost_matrix(x, y, params, spec);
  const AdjacencyMatrix ax = adjacency(x);
  const AdjacencyMatrix ay = adjacency(y);
  const auto deg_x = degrees(ax);
  const auto deg_y = degrees(ay);
  const double ep = std::pow(params.epsilon, params.p);
  const double half = std::pow(params.c, params.p) / 2.0;

  MetricBreakdown& b = out.breakdown;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) b.localisation_p += d(idx(i), idx(j)) * out.w(idx(i), idx(j));
    b.missed_p += half * out.w(idx(i), idx(ny));
  }
  for (std::size_t j = 0; j < ny; ++j) b.false_p += half * out.w(idx(nx), idx(j));
  double q_sum = 0.0;
  double lx = 0.0;
  for (std::size_t k = 0; k < nx + ny; ++k) {
    q_sum += sol.values[lay.q(k)];
    const double deg = static_cast<double>(k < nx ? deg_x[k] : deg_y[k - nx]);
    lx += deg * sol.values[lay.x(k)];
  }
  const double e_hat = sol.values[lay.e_hat];
  b.unassigned_edge_p = params.beta / 2.0 * ep * q_sum;
  b.half_edge_p = params.eta * ep * (lx - q_sum);
  b.assigned_edge_p = ep / 2.0 * e_hat - ep / 2.0 * (lx - q_sum);
  out.value = std::pow(std::max(0.0, sol.objective), 1.0 / params.p);
  b.total = out.value;
  return out;
}

}  // namespace ggospa
