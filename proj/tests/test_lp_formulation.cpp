// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ggospa/error.hpp"
#include "ggospa/lp_formulation.hpp"
#include "ggospa/metric_exact.hpp"
#include "ggospa/random.hpp"
#include "oracle.hpp"

using namespace ggospa;

namespace {

FamilyParams fig_params() {
  FamilyParams p;
  p.c = 3;
  p.p = 1;
  p.epsilon = 1;
  p.beta = 0.3;
  p.eta = 0.7;
  return p;
}

// Uniformly random partial injection as an assignment set.
AssignmentSet random_assignment(Rng& rng, std::size_t nx, std::size_t ny) {
  std::vector<std::size_t> ys(ny);
  std::iota(ys.begin(), ys.end(), 0);
  for (std::size_t k = ys.size(); k > 1; --k) std::swap(ys[k - 1], ys[rng.index(k)]);
  AssignmentSet gamma;
  std::size_t next = 0;
  for (std::size_t i = 0; i < nx && next < ny; ++i) {
    if (rng.bernoulli(0.6)) gamma.emplace_back(i, ys[next++]);
  }
  return gamma;
}

}  // namespace

TEST(CostMatrix, Examples) {
  FamilyParams prm = fig_params();
  EXPECT_EQ(build_cost_matrix(Graph{}, Graph{}, prm, {}), Eigen::MatrixXd::Zero(1, 1));

  const Graph x = make_graph({{0.0}}, {});
  const Graph y = make_graph({{2.0}}, {});
  Eigen::MatrixXd want(2, 2);
  want << 2, 1.5, 1.5, 0;
  EXPECT_TRUE(build_cost_matrix(x, y, prm, {}).isApprox(want));
  prm.p = 2;
  want << 4, 4.5, 4.5, 0;
  EXPECT_TRUE(build_cost_matrix(x, y, prm, {}).isApprox(want));
}

TEST(FamilyProgram, VariableCounts) {
  const Graph x = make_graph({{0.0}}, {});
  const auto prog = build_family_program(x, x, fig_params(), Integrality::integer);
  const auto& lay = prog.layout;
  EXPECT_EQ(lay.w_count(), 3u);
  EXPECT_EQ(lay.h_count(), 1u);
  EXPECT_EQ(lay.q_count(), 2u);
  EXPECT_EQ(prog.lp.num_variables(), 3u + 1u + 1u + 2u);
  EXPECT_EQ(lay.h_offset, 3u);
  EXPECT_EQ(lay.e_hat, 4u);
  EXPECT_EQ(lay.q_offset, 5u);
  EXPECT_EQ(prog.lp.names()[lay.e_hat], "e_hat");
}

TEST(FamilyProgram, LayoutAndRowCounts) {
  Rng rng(50);
  const Graph x = oracle::random_graph(rng, 3, 0.6);
  const Graph y = oracle::random_graph(rng, 4, 0.6);
  const auto prog = build_family_program(x, y, fig_params(), Integrality::relaxed);
  const auto& lay = prog.layout;
  EXPECT_EQ(lay.w_count(), 4u * 5u - 1u);
  EXPECT_EQ(lay.w(1, 2), 1u * 5u + 2u);
  EXPECT_EQ(lay.x(1), lay.w(1, 4));
  EXPECT_EQ(lay.x(3 + 2), lay.w(3, 2));
  EXPECT_EQ(prog.lp.num_constraints(), (3u + 4u) + 2u * 12u + 1u + 4u * 7u);
  for (std::size_t j = 0; j < lay.w_count(); ++j) {
    EXPECT_EQ(prog.lp.upper()[j], kInf);
    EXPECT_FALSE(prog.lp.integer()[j]);
  }
  const auto integer = build_family_program(x, y, fig_params(), Integrality::integer);
  for (std::size_t j = 0; j < lay.w_count(); ++j) {
    EXPECT_EQ(integer.lp.upper()[j], 1.0);
    EXPECT_TRUE(integer.lp.integer()[j]);
  }
}

TEST(FamilyProgram, GraphGospaCornerHasNoQCost) {
  Rng rng(51);
  const Graph x = oracle::random_graph(rng, 3, 0.7);
  const Graph y = oracle::random_graph(rng, 3, 0.7);
  FamilyParams prm = fig_params();
  prm.beta = 0.0;
  prm.eta = 0.5;
  prm.gospa_compat = true;
  const auto prog = build_family_program(x, y, prm, Integrality::integer);
  const auto& lay = prog.layout;
  const auto d = build_cost_matrix(x, y, prm, {});
  for (std::size_t k = 0; k < lay.q_count(); ++k) EXPECT_EQ(prog.lp.cost()[lay.q(k)], 0.0);
  for (std::size_t i = 0; i <= 3; ++i) {
    for (std::size_t j = 0; j <= 3; ++j) {
      if (i == 3 && j == 3) continue;
      EXPECT_DOUBLE_EQ(prog.lp.cost()[lay.w(i, j)],
                       d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  EXPECT_DOUBLE_EQ(prog.lp.cost()[lay.e_hat], prm.epsilon / 2);
}

TEST(FamilyProgram, RelaxedNeedsEtaAtLeastHalf) {
  FamilyParams prm = fig_params();
  prm.eta = 0.4;
  prm.beta = 0.2;
  EXPECT_THROW(build_family_program(Graph{}, Graph{}, prm, Integrality::relaxed),
               InvalidParams);
  EXPECT_NO_THROW(build_family_program(Graph{}, Graph{}, prm, Integrality::integer));
}

TEST(EdgeCostMatrixForm, Examples) {
  FamilyParams prm = fig_params();
  prm.beta = 0;
  prm.eta = 0.5;
  prm.gospa_compat = true;
  AdjacencyMatrix ax(2, 2), ay = AdjacencyMatrix::Zero(2, 2);
  ax << 0, 1, 1, 0;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 0) = w(1, 1) = 1;
  EXPECT_NEAR(edge_cost_matrix_form(w, ax, ay, prm), prm.epsilon, 1e-12);

  prm = fig_params();
  Eigen::MatrixXd all = Eigen::MatrixXd::Zero(3, 1);
  all(0, 0) = all(1, 0) = 1;
  EXPECT_NEAR(edge_cost_matrix_form(all, ax, AdjacencyMatrix::Zero(0, 0), prm),
              prm.beta * prm.epsilon, 1e-12);
}

TEST(EdgeCostMatrixForm, Errors) {
  AdjacencyMatrix a = AdjacencyMatrix::Zero(2, 2);
  EXPECT_THROW(edge_cost_matrix_form(Eigen::MatrixXd::Zero(2, 2), a, a, fig_params()),
               InvalidParams);
  EXPECT_THROW(edge_cost_matrix_form(Eigen::MatrixXd::Zero(3, 3), a, a, fig_params()),
               SolverError);
}

TEST(EdgeCostMatrixForm, EqualsSetFormOnBinaryW) {
  Rng rng(52);
  for (int t = 0; t < 400; ++t) {
    const Graph x = oracle::random_graph(rng, rng.index(7), 0.5);
    const Graph y = oracle::random_graph(rng, rng.index(7), 0.5);
    const auto prm = oracle::random_params(rng);
    const auto gamma = random_assignment(rng, x.num_nodes(), y.num_nodes());
    const auto w = matrix_from_assignment(gamma, x.num_nodes(), y.num_nodes());
    EXPECT_EQ(assignment_from_matrix(w), gamma);
    EXPECT_EQ(binaryness(w), 0.0);
    std::vector<std::size_t> f(x.num_nodes(), oracle::kNone);
    for (const auto& [i, j] : gamma) f[i] = j;
    const auto c = oracle::family_cost(x, y, f, prm);
    const double e = edge_cost_matrix_form(w, adjacency(x), adjacency(y), prm);
    EXPECT_NEAR(e, c.assigned + c.half + c.unassigned, 1e-9);
    EXPECT_NEAR(e, edge_mismatch_cost(gamma, adjacency(x), adjacency(y), prm).e_p, 1e-9);
  }
}

TEST(Binaryness, Values) {
  Eigen::MatrixXd w(2, 2);
  w << 1, 0, 0.25, 0.5;
  EXPECT_DOUBLE_EQ(binaryness(w), 0.5);
  w << 1, 0, 0.9, 1e-7;
  EXPECT_NEAR(binaryness(w), 0.1, 1e-12);
}

TEST(FamilyLp, IdentityGivesZeroInBothModes) {
  Rng rng(53);
  const Graph g = oracle::random_graph(rng, 5, 0.5);
  for (auto mode : {Integrality::integer, Integrality::relaxed}) {
    const auto r = family_distance_lp(g, g, fig_params(), mode);
    EXPECT_NEAR(r.value, 0.0, 1e-9);
    EXPECT_TRUE(r.w.isApprox(matrix_from_assignment(
        {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}, 5, 5)));
  }
}

TEST(FamilyLp, TriangleFixtures) {
  const Graph x = make_graph({{0, 0}, {10, 0}, {20, 0}}, {{0, 1}, {1, 2}, {0, 2}});
  const Graph y = make_graph({{0, 0}, {10, 0}, {20, 0}, {30, 0}}, {{0, 1}, {1, 2}, {1, 3}});
  const auto r = family_distance_lp(x, y, fig_params(), Integrality::integer);
  EXPECT_NEAR(r.value, 3.2, 1e-9);
  EXPECT_NEAR(r.breakdown.false_p, 1.5, 1e-9);
  EXPECT_NEAR(r.breakdown.assigned_edge_p, 1.0, 1e-9);
  EXPECT_NEAR(r.breakdown.half_edge_p, 0.7, 1e-9);
}

TEST(FamilyLp, IntegerMatchesOracleAndRelaxedIsLowerBound) {
  Rng rng(54);
  for (int t = 0; t < 120; ++t) {
    const Graph x = oracle::random_graph(rng, rng.index(6), 0.5);
    const Graph y = oracle::random_graph(rng, rng.index(6), 0.5);
    const auto prm = oracle::random_params(rng, true);
    const double want = oracle::family_value(x, y, prm);
    const auto integer = family_distance_lp(x, y, prm, Integrality::integer);
    ASSERT_EQ(integer.status, LpStatus::optimal);
    EXPECT_NEAR(integer.value, want, 1e-9);
    EXPECT_NEAR(integer.breakdown.sum_p(), std::pow(integer.value, prm.p), 1e-9);
    EXPECT_EQ(integer.binaryness, 0.0);

    const auto relaxed = family_distance_lp(x, y, prm, Integrality::relaxed);
    ASSERT_EQ(relaxed.status, LpStatus::optimal);
    EXPECT_GE(relaxed.objective, -1e-9);
    EXPECT_LE(relaxed.value, integer.value + 1e-9);
    EXPECT_NEAR(relaxed.breakdown.sum_p(), relaxed.objective, 1e-9);
    if (relaxed.binaryness <= 1e-6) EXPECT_NEAR(relaxed.value, integer.value, 1e-9);
  }
}

TEST(FamilyLp, LinearizationVariablesAreTight) {
  Rng rng(55);
  for (int t = 0; t < 60; ++t) {
    const Graph x = oracle::random_graph(rng, 1 + rng.index(5), 0.5);
    const Graph y = oracle::random_graph(rng, 1 + rng.index(5), 0.5);
    const auto prm = oracle::random_params(rng);
    const auto prog = build_family_program(x, y, prm, Integrality::integer);
    const auto sol = solve_ilp(prog.lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_LE(prog.lp.max_violation(sol.values), 1e-8);
    const auto& lay = prog.layout;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lay.n_x),
                                              static_cast<Eigen::Index>(lay.n_y));
    for (std::size_t i = 0; i < lay.n_x; ++i) {
      for (std::size_t j = 0; j < lay.n_y; ++j) {
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sol.values[lay.w(i, j)];
      }
    }
    const Eigen::MatrixXd diff =
        adjacency(x).cast<double>() * w - w * adjacency(y).cast<double>();
    double h_sum = 0.0;
    for (std::size_t i = 0; i < lay.n_x; ++i) {
      for (std::size_t j = 0; j < lay.n_y; ++j) {
        const double h = sol.values[lay.h(i, j)];
        h_sum += h;
        EXPECT_NEAR(h, std::abs(diff(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j))), 1e-7);
      }
    }
    EXPECT_NEAR(sol.values[lay.e_hat], h_sum, 1e-7);
    // q(k) = x(k) * (Q x)(k) for binary x.
    for (std::size_t k = 0; k < lay.q_count(); ++k) {
      const double xk = sol.values[lay.x(k)];
      double qx = 0.0;
      const auto& a = k < lay.n_x ? adjacency(x) : adjacency(y);
      const std::size_t base = k < lay.n_x ? 0 : lay.n_x;
      for (Eigen::Index v = 0; v < a.rows(); ++v) {
        if (a(static_cast<Eigen::Index>(k - base), v)) qx += sol.values[lay.x(base + static_cast<std::size_t>(v))];
      }
      EXPECT_NEAR(sol.values[lay.q(k)], xk * qx, 1e-7);
    }
  }
}
