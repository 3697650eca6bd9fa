// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ggospa/error.hpp"
#include "ggospa/lp.hpp"

namespace ggospa {
namespace {

enum class VarState { basic, at_lower, at_upper, free_zero };

struct Column {
  std::vector<Eigen::Index> rows;
  std::vector<double> values;
};

// Deterministic perturbation stream (SplitMix64 on the row index).
double unit_noise(std::uint64_t i) {
  std::uint64_t z = i + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Bounded-variable revised simplex on  A x + s = b,  l <= (x, s) <= u.
// Columns are ordered structural, slack, artificial. The basis inverse is
// kept dense and updated in product form, with a fresh factorization every
// `refactor_interval` pivots.
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const std::vector<double>& lower,
                 const std::vector<double>& upper, const SimplexOptions& options)
      : options_(options),
        n_(lp.num_variables()),
        m_(lp.num_constraints()) {
    columns_.resize(n_);
    b_.resize(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
      const auto& row = lp.constraints()[r];
      b_(static_cast<Eigen::Index>(r)) = row.rhs;
      for (const auto& [j, a] : row.terms) {
        if (a == 0.0) continue;
        columns_[j].rows.push_back(static_cast<Eigen::Index>(r));
        columns_[j].values.push_back(a);
      }
    }
    lower_ = lower;
    upper_ = upper;
    cost_ = lp.cost();
    for (std::size_t r = 0; r < m_; ++r) {
      columns_.push_back({{static_cast<Eigen::Index>(r)}, {1.0}});
      switch (lp.constraints()[r].relation) {
        case Relation::less_equal:
          lower_.push_back(0.0);
          upper_.push_back(kInf);
          break;
        case Relation::greater_equal:
          lower_.push_back(-kInf);
          upper_.push_back(0.0);
          break;
        case Relation::equal:
          lower_.push_back(0.0);
          upper_.push_back(0.0);
          break;
      }
      cost_.push_back(0.0);
    }
    if (options_.iteration_limit == 0) {
      options_.iteration_limit = 50 * (n_ + 2 * m_) + 1000;
    }
    if (options_.refactor_interval == 0) {
      options_.refactor_interval = std::max<std::size_t>(100, m_ / 2);
    }
  }

  LpSolution solve() {
    LpSolution out;
    for (std::size_t j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j]) {
        out.status = LpStatus::infeasible;
        return out;
      }
    }
    initial_basis();
    perturb();

    // Phase 1: drive the artificials to zero.
    if (columns_.size() > n_ + m_) {
      std::vector<double> phase1(columns_.size(), 0.0);
      for (std::size_t j = n_ + m_; j < columns_.size(); ++j) phase1[j] = 1.0;
      const LpStatus s = iterate(phase1);
      if (s == LpStatus::limit_reached) return finish(out, s);
      double infeasibility = 0.0;
      for (std::size_t j = n_ + m_; j < columns_.size(); ++j) {
        infeasibility += x_[j];
      }
      const double scale = std::max(1.0, b_.cwiseAbs().maxCoeff());
      if (infeasibility > 1e-7 * scale) return finish(out, LpStatus::infeasible);
      for (std::size_t j = n_ + m_; j < columns_.size(); ++j) {
        upper_[j] = 0.0;
        if (state_[j] != VarState::basic) {
          state_[j] = VarState::at_lower;
          x_[j] = 0.0;
        }
      }
    }

    std::vector<double> phase2(columns_.size(), 0.0);
    std::copy(cost_.begin(), cost_.begin() + static_cast<long>(n_), phase2.begin());
    LpStatus s = iterate(phase2);
    if (s != LpStatus::optimal) return finish(out, s);

    if (unperturb()) {
      s = dual_iterate(phase2);
      if (s != LpStatus::optimal) return finish(out, s);
      s = iterate(phase2);
    }
    return finish(out, s);
  }

 private:
  LpSolution& finish(LpSolution& out, LpStatus status) {
    out.status = status;
    out.iterations = iterations_;
    if (status == LpStatus::optimal || status == LpStatus::limit_reached) {
      out.values.assign(x_.begin(), x_.begin() + static_cast<long>(n_));
      out.objective = 0.0;
      for (std::size_t j = 0; j < n_; ++j) out.objective += cost_[j] * x_[j];
    }
    return out;
  }

  void place_nonbasic_structurals() {
    const std::size_t total = n_ + m_;
    x_.assign(total, 0.0);
    state_.assign(total, VarState::at_lower);
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
        state_[j] = VarState::at_lower;
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        state_[j] = VarState::at_upper;
      } else {
        x_[j] = 0.0;
        state_[j] = VarState::free_zero;
      }
    }
  }

  void initial_basis() {
    place_nonbasic_structurals();
    Eigen::VectorXd residual = b_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      const auto& col = columns_[j];
      for (std::size_t k = 0; k < col.rows.size(); ++k) {
        residual(col.rows[k]) -= col.values[k] * x_[j];
      }
    }
    head_.assign(m_, 0);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t s = n_ + r;
      const double v = residual(static_cast<Eigen::Index>(r));
      const double tol = options_.feasibility_tol;
      if (v >= lower_[s] - tol && v <= upper_[s] + tol) {
        head_[r] = s;
        state_[s] = VarState::basic;
        x_[s] = v;
        continue;
      }
      // Slack parks at its nearest bound; an artificial absorbs the rest.
      const double parked = std::clamp(v, lower_[s], upper_[s]);
      x_[s] = parked;
      state_[s] = parked == lower_[s] ? VarState::at_lower : VarState::at_upper;
      const double sign = v > parked ? 1.0 : -1.0;
      columns_.push_back({{static_cast<Eigen::Index>(r)}, {sign}});
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      x_.push_back(std::abs(v - parked));
      state_.push_back(VarState::basic);
      head_[r] = columns_.size() - 1;
    }
  }

  // Shifts the finite bounds of basic inequality slacks outward by a small
  // random amount, so that rows tight at the start are no longer degenerate.
  void perturb() {
    if (options_.perturbation <= 0.0) return;
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t s = n_ + r;
      if (state_[s] != VarState::basic || lower_[s] == upper_[s]) continue;
      const double scale = std::max(1.0, std::abs(b_(static_cast<Eigen::Index>(r))));
      const double shift = options_.perturbation * scale * (1.0 + unit_noise(r));
      perturbed_.push_back({s, lower_[s], upper_[s]});
      if (std::isfinite(lower_[s])) lower_[s] -= shift;
      if (std::isfinite(upper_[s])) upper_[s] += shift;
    }
  }

  // Restores the true bounds; returns whether anything changed.
  bool unperturb() {
    if (perturbed_.empty()) return false;
    for (const auto& [j, lo, hi] : perturbed_) {
      lower_[j] = lo;
      upper_[j] = hi;
      if (state_[j] == VarState::at_lower) x_[j] = lo;
      if (state_[j] == VarState::at_upper) x_[j] = hi;
    }
    perturbed_.clear();
    return true;
  }

  void refactor(const std::vector<double>& cost) {
    if (m_ > 0) invert_basis();
    // x_B = B^{-1} (b - N x_N)
    Eigen::VectorXd rhs = b_;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (state_[j] == VarState::basic || x_[j] == 0.0) continue;
      const auto& col = columns_[j];
      for (std::size_t k = 0; k < col.rows.size(); ++k) {
        rhs(col.rows[k]) -= col.values[k] * x_[j];
      }
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t r = 0; r < m_; ++r) x_[head_[r]] = xb(static_cast<Eigen::Index>(r));
    compute_duals(cost);
    since_refactor_ = 0;
  }

  // Slack and artificial columns are signed unit vectors, so with rows S
  // covered by them and rows R by the k structural columns C,
  //   B^{-1} = [ B_RC^{-1}, 0 ; -sigma B_SC B_RC^{-1}, sigma ]
  // up to permutation. Only the k x k block needs an LU.
  void invert_basis() {
    const auto m = static_cast<Eigen::Index>(m_);
    std::vector<Eigen::Index> unit_row(m_, -1);
    std::vector<char> row_covered(m_, 0);
    std::vector<std::size_t> structural;
    for (std::size_t p = 0; p < m_; ++p) {
      if (head_[p] >= n_) {
        const auto row = columns_[head_[p]].rows[0];
        if (row_covered[static_cast<std::size_t>(row)]) {
          throw SolverError("simplex basis is singular");
        }
        unit_row[p] = row;
        row_covered[static_cast<std::size_t>(row)] = 1;
      } else {
        structural.push_back(p);
      }
    }
    std::vector<Eigen::Index> free_rows;
    std::vector<Eigen::Index> row_pos(m_, -1);
    for (std::size_t r = 0; r < m_; ++r) {
      if (!row_covered[r]) {
        row_pos[r] = static_cast<Eigen::Index>(free_rows.size());
        free_rows.push_back(static_cast<Eigen::Index>(r));
      }
    }
    const auto k = static_cast<Eigen::Index>(structural.size());

    Eigen::MatrixXd f;
    if (k > 0) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index c = 0; c < k; ++c) {
        const auto& col = columns_[head_[structural[static_cast<std::size_t>(c)]]];
        for (std::size_t t = 0; t < col.rows.size(); ++t) {
          const auto rp = row_pos[static_cast<std::size_t>(col.rows[t])];
          if (rp >= 0) block(rp, c) = col.values[t];
        }
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
      if (!(lu.rcond() > 1e-13)) throw SolverError("simplex basis is singular");
      f = lu.inverse();  // rows follow the structural positions
    }

    binv_.setZero(m, m);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto p = static_cast<Eigen::Index>(structural[static_cast<std::size_t>(c)]);
      for (Eigen::Index j = 0; j < k; ++j) binv_(p, free_rows[static_cast<std::size_t>(j)]) = f(c, j);
    }
    // g(s, :) = B_sC F for covered rows s.
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto& col = columns_[head_[structural[static_cast<std::size_t>(c)]]];
      for (std::size_t t = 0; t < col.rows.size(); ++t) {
        const auto row = col.rows[t];
        if (row_covered[static_cast<std::size_t>(row)]) g.row(row) += col.values[t] * f.row(c);
      }
    }
    for (std::size_t p = 0; p < m_; ++p) {
      const Eigen::Index s = unit_row[p];
      if (s < 0) continue;
      const double sigma = columns_[head_[p]].values[0];
      const auto pp = static_cast<Eigen::Index>(p);
      binv_(pp, s) = sigma;
      for (Eigen::Index j = 0; j < k; ++j) {
        binv_(pp, free_rows[static_cast<std::size_t>(j)]) = -sigma * g(s, j);
      }
    }
  }

  void compute_duals(const std::vector<double>& cost) {
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) cb(static_cast<Eigen::Index>(r)) = cost[head_[r]];
    y_ = binv_.transpose() * cb;
  }

  double reduced_cost(std::size_t j, const std::vector<double>& cost) const {
    const auto& col = columns_[j];
    double d = cost[j];
    for (std::size_t k = 0; k < col.rows.size(); ++k) {
      d -= y_(col.rows[k]) * col.values[k];
    }
    return d;
  }

  // alpha = B^{-1} A_q
  void column(std::size_t q, Eigen::VectorXd& alpha) const {
    alpha.setZero();
    const auto& col = columns_[q];
    for (std::size_t k = 0; k < col.rows.size(); ++k) {
      alpha.noalias() += col.values[k] * binv_.col(col.rows[k]);
    }
  }

  double exact_reduced_cost(std::size_t q, const Eigen::VectorXd& alpha,
                            const std::vector<double>& cost) const {
    double dq = cost[q];
    for (std::size_t r = 0; r < m_; ++r) dq -= cost[head_[r]] * alpha(static_cast<Eigen::Index>(r));
    return dq;
  }

  // Column q replaces the basic variable at position r; dq is its reduced
  // cost before the change. Updates B^{-1} and the duals.
  void pivot(std::size_t r, std::size_t q, const Eigen::VectorXd& alpha, double dq,
             const std::vector<double>& cost) {
    const auto ri = static_cast<Eigen::Index>(r);
    const double piv = alpha(ri);
    head_[r] = q;
    state_[q] = VarState::basic;
    nz_.clear();
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (i != ri && alpha(i) != 0.0) nz_.push_back(i);
    }
    const double ratio = dq / piv;
    for (Eigen::Index k = 0; k < binv_.cols(); ++k) {
      double t = binv_(ri, k);
      if (t == 0.0) continue;
      y_(k) += ratio * t;
      t /= piv;
      double* colk = binv_.col(k).data();
      for (Eigen::Index i : nz_) colk[i] -= alpha(i) * t;
      colk[ri] = t;
    }
    if (++since_refactor_ >= options_.refactor_interval) refactor(cost);
  }

  // Returns the entering column and its direction (+1 up, -1 down), or
  // columns_.size() when the current basis is optimal.
  std::pair<std::size_t, int> price(const std::vector<double>& cost,
                                    bool bland) const {
    const double tol = options_.optimality_tol;
    std::size_t best = columns_.size();
    int best_dir = 0;
    double best_score = 0.0;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      const VarState s = state_[j];
      if (s == VarState::basic) continue;
      if (lower_[j] == upper_[j]) continue;
      const double d = reduced_cost(j, cost);
      int dir = 0;
      if (s == VarState::at_lower && d < -tol) dir = 1;
      else if (s == VarState::at_upper && d > tol) dir = -1;
      else if (s == VarState::free_zero && std::abs(d) > tol) dir = d < 0 ? 1 : -1;
      if (dir == 0) continue;
      if (bland) return {j, dir};
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
        best_dir = dir;
      }
    }
    return {best, best_dir};
  }

  LpStatus iterate(const std::vector<double>& cost) {
    refactor(cost);
    bool bland = false;
    std::size_t degenerate_run = 0;
    Eigen::VectorXd alpha(static_cast<Eigen::Index>(m_));
    for (;;) {
      if (iterations_ >= options_.iteration_limit) return LpStatus::limit_reached;
      auto [q, dir] = price(cost, bland);
      if (q == columns_.size()) {
        if (since_refactor_ == 0) return LpStatus::optimal;
        // Confirm optimality against a fresh factorization.
        refactor(cost);
        std::tie(q, dir) = price(cost, bland);
        if (q == columns_.size()) return LpStatus::optimal;
      }
      ++iterations_;
      column(q, alpha);

      // The incremental duals drift; confirm the step improves before taking it.
      const double dq = exact_reduced_cost(q, alpha, cost);
      if (dir * dq >= -options_.optimality_tol) {
        refactor(cost);
        continue;
      }

      // Ratio test. Basic r moves by -dir * alpha_r per unit step.
      const double ptol = options_.pivot_tol;
      const double ftol = options_.feasibility_tol;
      auto limit = [&](std::size_t r, double slack_tol) {
        const double rate = dir * alpha(static_cast<Eigen::Index>(r));
        const std::size_t j = head_[r];
        if (rate > ptol) {
          if (!std::isfinite(lower_[j])) return kInf;
          return (x_[j] - lower_[j] + slack_tol) / rate;
        }
        if (rate < -ptol) {
          if (!std::isfinite(upper_[j])) return kInf;
          return (upper_[j] - x_[j] + slack_tol) / -rate;
        }
        return kInf;
      };

      std::size_t leave = m_;
      double theta = kInf;
      if (bland) {
        for (std::size_t r = 0; r < m_; ++r) {
          const double t = std::max(0.0, limit(r, 0.0));
          if (!std::isfinite(t)) continue;
          if (leave == m_ || t < theta - 1e-12) {
            theta = t;
            leave = r;
          } else if (t <= theta + 1e-12 && head_[r] < head_[leave]) {
            theta = std::min(theta, t);
            leave = r;
          }
        }
      } else {
        // Harris two-pass: bound with tolerance, then pick the largest pivot.
        double relaxed = kInf;
        for (std::size_t r = 0; r < m_; ++r) relaxed = std::min(relaxed, limit(r, ftol));
        if (std::isfinite(relaxed)) {
          double best_pivot = 0.0;
          for (std::size_t r = 0; r < m_; ++r) {
            const double t = limit(r, 0.0);
            if (t <= relaxed) {
              const double piv = std::abs(alpha(static_cast<Eigen::Index>(r)));
              if (piv > best_pivot) {
                best_pivot = piv;
                leave = r;
                theta = std::max(0.0, t);
              }
            }
          }
        }
      }

      const double span = dir > 0 ? upper_[q] - x_[q] : x_[q] - lower_[q];
      const bool flip = std::isfinite(span) && span <= theta;
      if (flip) theta = span;
      if (!std::isfinite(theta)) {
        if (since_refactor_ == 0) return LpStatus::unbounded;
        refactor(cost);
        continue;
      }

      if (theta <= 1e-12) {
        if (++degenerate_run > options_.degeneracy_threshold) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      if (theta > 0.0) {
        for (std::size_t r = 0; r < m_; ++r) {
          x_[head_[r]] -= dir * theta * alpha(static_cast<Eigen::Index>(r));
        }
        x_[q] += dir * theta;
      }

      if (flip) {
        x_[q] = dir > 0 ? upper_[q] : lower_[q];
        state_[q] = dir > 0 ? VarState::at_upper : VarState::at_lower;
        continue;
      }

      const std::size_t out = head_[leave];
      const double rate = dir * alpha(static_cast<Eigen::Index>(leave));
      x_[out] = rate > 0 ? lower_[out] : upper_[out];
      state_[out] = rate > 0 || lower_[out] == upper_[out] ? VarState::at_lower
                                                           : VarState::at_upper;
      pivot(leave, q, alpha, dq, cost);
    }
  }

  // Dual simplex from a dual feasible basis: repeatedly moves the most
  // infeasible basic variable to its violated bound.
  LpStatus dual_iterate(const std::vector<double>& cost) {
    refactor(cost);
    Eigen::VectorXd alpha(static_cast<Eigen::Index>(m_));
    Eigen::VectorXd rho(static_cast<Eigen::Index>(m_));
    const double ptol = options_.pivot_tol;
    for (;;) {
      if (iterations_ >= options_.iteration_limit) return LpStatus::limit_reached;
      std::size_t r = m_;
      double worst = options_.feasibility_tol;
      for (std::size_t p = 0; p < m_; ++p) {
        const std::size_t j = head_[p];
        const double v = std::max(lower_[j] - x_[j], x_[j] - upper_[j]);
        if (v > worst) {
          worst = v;
          r = p;
        }
      }
      if (r == m_) return LpStatus::optimal;
      ++iterations_;

      const std::size_t out = head_[r];
      const bool raise = x_[out] < lower_[out];
      rho = binv_.row(static_cast<Eigen::Index>(r)).transpose();

      std::size_t q = columns_.size();
      int q_dir = 0;
      double best_ratio = kInf;
      double best_pivot = 0.0;
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        const VarState s = state_[j];
        if (s == VarState::basic || lower_[j] == upper_[j]) continue;
        const auto& col = columns_[j];
        double a = 0.0;
        for (std::size_t k = 0; k < col.rows.size(); ++k) a += rho(col.rows[k]) * col.values[k];
        if (std::abs(a) <= ptol) continue;
        // x_out moves by -dir * a per unit step of column j.
        const int dir = (a > 0 ? -1 : 1) * (raise ? 1 : -1);
        if (s == VarState::at_lower && dir < 0) continue;
        if (s == VarState::at_upper && dir > 0) continue;
        const double ratio = std::max(0.0, dir * reduced_cost(j, cost)) / std::abs(a);
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && std::abs(a) > best_pivot)) {
          best_ratio = std::min(best_ratio, ratio);
          best_pivot = std::abs(a);
          q = j;
          q_dir = dir;
        }
      }
      if (q == columns_.size()) return LpStatus::infeasible;

      column(q, alpha);
      const auto ri = static_cast<Eigen::Index>(r);
      if (std::abs(alpha(ri)) <= ptol) {
        refactor(cost);
        continue;
      }
      const double dq = exact_reduced_cost(q, alpha, cost);
      const double target = raise ? lower_[out] : upper_[out];
      const double step = (x_[out] - target) / (q_dir * alpha(ri));
      for (std::size_t p = 0; p < m_; ++p) {
        x_[head_[p]] -= q_dir * step * alpha(static_cast<Eigen::Index>(p));
      }
      x_[q] += q_dir * step;
      x_[out] = target;
      state_[out] = raise || lower_[out] == upper_[out] ? VarState::at_lower
                                                        : VarState::at_upper;
      pivot(r, q, alpha, dq, cost);
    }
  }

  struct Perturbed {
    std::size_t column;
    double lower;
    double upper;
  };

  SimplexOptions options_;
  std::size_t n_;
  std::size_t m_;
  std::vector<Column> columns_;
  Eigen::VectorXd b_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<Perturbed> perturbed_;

  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<std::size_t> head_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd y_;
  std::vector<Eigen::Index> nz_;
  std::size_t since_refactor_ = 0;
  std::size_t iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const std::vector<double>& lower,
                    const std::vector<double>& upper,
                    const SimplexOptions& options) {
  if (lower.size() != lp.num_variables() || upper.size() != lp.num_variables()) {
    throw InvalidParams("bound vectors do not match the program size");
  }
  RevisedSimplex simplex(lp, lower, upper, options);
  return simplex.solve();
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  return solve_lp(lp, lp.lower(), lp.upper(), options);
}

}  // namespace ggospa
