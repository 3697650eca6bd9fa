// SPDX-License-Identifier: Apache-2.0

// Brute-force reference implementations used as test oracles.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ggospa/graph.hpp"
#include "ggospa/lp.hpp"
#include "ggospa/params.hpp"
#include "ggospa/random.hpp"

namespace oracle {

using ggospa::Attribute;
using ggospa::Graph;

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

inline double dist(const Attribute& a, const Attribute& b,
                   const ggospa::BaseMetricSpec& spec, double c) {
  if (spec.kind == ggospa::BaseMetricKind::discrete) {
    return a == b ? 0.0 : spec.delta.value_or(2.0 * c);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline bool edge(const Graph& g, std::size_t i, std::size_t j) {
  for (const auto& [a, b] : g.edges()) {
    if ((a == i && b == j) || (a == j && b == i)) return true;
  }
  return false;
}

/// Calls visit(f) for every partial injection f: [0,nx) -> [0,ny) u {kNone}.
inline void for_each_injection(
    std::size_t nx, std::size_t ny,
    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> f(nx, kNone);
  std::vector<bool> taken(ny, false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == nx) {
      visit(f);
      return;
    }
    f[i] = kNone;
    rec(i + 1);
    for (std::size_t j = 0; j < ny; ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      f[i] = j;
      rec(i + 1);
      taken[j] = false;
    }
    f[i] = kNone;
  };
  rec(0);
}

struct Cost {
  double loc = 0, missed = 0, fals = 0, assigned = 0, half = 0, unassigned = 0;
  double sum() const { return loc + missed + fals + assigned + half + unassigned; }
};

/// Family cost (p-th power) of a fixed injection, straight from the
/// definition: every edge of either graph is classified by how many of its
/// endpoints are assigned.
inline Cost family_cost(const Graph& x, const Graph& y,
                        const std::vector<std::size_t>& f,
                        const ggospa::FamilyParams& prm,
                        const ggospa::BaseMetricSpec& spec = {}) {
  const double half_c = std::pow(prm.c, prm.p) / 2.0;
  const double ep = std::pow(prm.epsilon, prm.p);
  std::vector<std::size_t> g(y.num_nodes(), kNone);
  Cost cost;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == kNone) continue;
    g[f[i]] = i;
    ++assigned;
    cost.loc += std::pow(dist(x.attribute(i), y.attribute(f[i]), spec, prm.c), prm.p);
  }
  cost.missed = half_c * static_cast<double>(x.num_nodes() - assigned);
  cost.fals = half_c * static_cast<double>(y.num_nodes() - assigned);
  for (const auto& [a, b] : x.edges()) {
    const int n = (f[a] != kNone) + (f[b] != kNone);
    if (n == 2) {
      if (!edge(y, f[a], f[b])) cost.assigned += ep;
    } else if (n == 1) {
      cost.half += prm.eta * ep;
    } else {
      cost.unassigned += prm.beta * ep;
    }
  }
  for (const auto& [a, b] : y.edges()) {
    const int n = (g[a] != kNone) + (g[b] != kNone);
    if (n == 2) {
      if (!edge(x, g[a], g[b])) cost.assigned += ep;
    } else if (n == 1) {
      cost.half += prm.eta * ep;
    } else {
      cost.unassigned += prm.beta * ep;
    }
  }
  return cost;
}

/// Minimum over all injections of the family cost; returns value^p.
inline double family_value_p(const Graph& x, const Graph& y,
                             const ggospa::FamilyParams& prm,
                             const ggospa::BaseMetricSpec& spec = {}) {
  double best = std::numeric_limits<double>::infinity();
  for_each_injection(x.num_nodes(), y.num_nodes(), [&](const auto& f) {
    best = std::min(best, family_cost(x, y, f, prm, spec).sum());
  });
  return best;
}

inline double family_value(const Graph& x, const Graph& y,
                           const ggospa::FamilyParams& prm,
                           const ggospa::BaseMetricSpec& spec = {}) {
  return std::pow(family_value_p(x, y, prm, spec), 1.0 / prm.p);
}

/// Graph GOSPA (value_p): localisation, c^p/2 per unassigned node and
/// (eps^p/2) sum |A_X W - W A_Y| over the real-node block of W.
inline double graph_gospa_value_p(const Graph& x, const Graph& y, double c,
                                  double p, double eps,
                                  const ggospa::BaseMetricSpec& spec = {}) {
  const auto nx = static_cast<Eigen::Index>(x.num_nodes());
  const auto ny = static_cast<Eigen::Index>(y.num_nodes());
  Eigen::MatrixXd ax = Eigen::MatrixXd::Zero(nx, nx);
  Eigen::MatrixXd ay = Eigen::MatrixXd::Zero(ny, ny);
  for (const auto& [a, b] : x.edges()) {
    ax(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1;
    ax(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = 1;
  }
  for (const auto& [a, b] : y.edges()) {
    ay(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1;
    ay(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = 1;
  }
  const double half_c = std::pow(c, p) / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for_each_injection(x.num_nodes(), y.num_nodes(), [&](const auto& f) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nx, ny);
    double s = 0.0;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] == kNone) continue;
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f[i])) = 1.0;
      s += std::pow(dist(x.attribute(i), y.attribute(f[i]), spec, c), p);
      ++assigned;
    }
    s += half_c * static_cast<double>(x.num_nodes() + y.num_nodes() - 2 * assigned);
    s += std::pow(eps, p) / 2.0 * (ax * w - w * ay).cwiseAbs().sum();
    best = std::min(best, s);
  });
  return best;
}

/// Node-set GOSPA (value_p) by enumeration.
inline double gospa_value_p(const std::vector<Attribute>& vx,
                            const std::vector<Attribute>& vy, double c,
                            double p, const ggospa::BaseMetricSpec& spec = {}) {
  const double half_c = std::pow(c, p) / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for_each_injection(vx.size(), vy.size(), [&](const auto& f) {
    double s = 0.0;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] == kNone) continue;
      ++assigned;
      s += std::pow(dist(vx[i], vy[f[i]], spec, c), p);
    }
    s += half_c * static_cast<double>(vx.size() + vy.size() - 2 * assigned);
    best = std::min(best, s);
  });
  return best;
}

/// LP optimum by enumerating every basic solution: choose n linearly
/// independent tight constraints among rows and finite bounds. Only valid
/// when the feasible region is bounded. Returns +inf when infeasible.
inline double lp_vertex_minimum(const ggospa::LinearProgram& lp,
                                double tol = 1e-9) {
  const std::size_t n = lp.num_variables();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& c : lp.constraints()) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const auto& [j, v] : c.terms) a(static_cast<Eigen::Index>(j)) += v;
    rows.push_back(a);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (double b : {lp.lower()[j], lp.upper()[j]}) {
      if (!std::isfinite(b)) continue;
      Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      a(static_cast<Eigen::Index>(j)) = 1.0;
      rows.push_back(a);
      rhs.push_back(b);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k,
                                                          std::size_t from) {
    if (k == n) {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      Eigen::VectorXd b(static_cast<Eigen::Index>(n));
      for (std::size_t r = 0; r < n; ++r) {
        m.row(static_cast<Eigen::Index>(r)) = rows[pick[r]].transpose();
        b(static_cast<Eigen::Index>(r)) = rhs[pick[r]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (lu.rank() < static_cast<Eigen::Index>(n)) return;
      const Eigen::VectorXd v = lu.solve(b);
      std::vector<double> x(v.data(), v.data() + v.size());
      if (lp.max_violation(x) > tol) return;
      best = std::min(best, lp.objective(x));
      return;
    }
    for (std::size_t r = from; r < rows.size(); ++r) {
      pick[k] = r;
      rec(k + 1, r + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Uniformly random attributes in [0, spread]^dim and edge probability pe.
inline Graph random_graph(ggospa::Rng& rng, std::size_t n, double pe,
                          std::size_t dim = 2, double spread = 6.0) {
  std::vector<Attribute> attrs(n, Attribute(dim));
  for (auto& a : attrs) {
    for (auto& v : a) v = rng.uniform(0.0, spread);
  }
  std::vector<ggospa::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(pe)) edges.emplace_back(i, j);
    }
  }
  return Graph(std::move(attrs), std::move(edges));
}

/// Integer attribute codes in [0, labels), for the discrete metric.
inline Graph random_labelled_graph(ggospa::Rng& rng, std::size_t n, double pe,
                                   std::size_t labels) {
  std::vector<Attribute> attrs(n);
  for (auto& a : attrs) a = {static_cast<double>(rng.index(labels))};
  std::vector<ggospa::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(pe)) edges.emplace_back(i, j);
    }
  }
  return Graph(std::move(attrs), std::move(edges));
}

/// Valid params with c in [0.5, 6], epsilon in [0.1, 3], p in {1, 2} and
/// beta <= eta drawn uniformly; eta >= 1/2 when `relaxed`.
inline ggospa::FamilyParams random_params(ggospa::Rng& rng,
                                          bool relaxed = false) {
  ggospa::FamilyParams prm;
  prm.c = rng.uniform(0.5, 6.0);
  prm.p = rng.bernoulli(0.7) ? 1.0 : 2.0;
  prm.epsilon = rng.uniform(0.1, 3.0);
  prm.eta = relaxed ? rng.uniform(0.5, 1.0) : rng.uniform(0.05, 1.0);
  prm.beta = rng.uniform(0.01, 1.0) * prm.eta;
  return prm;
}

inline Graph relabel(const Graph& g, const std::vector<std::size_t>& perm) {
  std::vector<Attribute> attrs(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) attrs[perm[i]] = g.attribute(i);
  std::vector<ggospa::Edge> edges;
  for (const auto& [a, b] : g.edges()) edges.emplace_back(perm[a], perm[b]);
  return Graph(std::move(attrs), std::move(edges));
}

}  // namespace oracle
