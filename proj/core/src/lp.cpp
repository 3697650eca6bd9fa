// SPDX-License-Identifier: Apache-2.0

#include "ggospa/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ggospa/error.hpp"

namespace ggospa {

std::size_t LinearProgram::add_variable(std::string name, double lower,
                                        double upper, double cost,
                                        bool integer) {
  if (integer && (lower != 0.0 || upper != 1.0)) {
    throw InvalidParams("integer variable " + name + " must have bounds [0,1]");
  }
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer);
  names_.push_back(std::move(name));
  return cost_.size() - 1;
}

void LinearProgram::add_constraint(LinearConstraint constraint) {
  for (const auto& [j, a] : constraint.terms) {
    if (j >= num_variables()) {
      throw InvalidParams("constraint references unknown variable " +
                          std::to_string(j));
    }
    (void)a;
  }
  constraints_.push_back(std::move(constraint));
}

void LinearProgram::add_constraint(
    std::vector<std::pair<std::size_t, double>> terms, Relation relation,
    double rhs) {
  add_constraint(LinearConstraint{std::move(terms), relation, rhs});
}

double LinearProgram::objective(const std::vector<double>& x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) total += cost_[j] * x[j];
  return total;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    worst = std::max(worst, lower_[j] - x[j]);
    worst = std::max(worst, x[j] - upper_[j]);
  }
  for (const auto& row : constraints_) {
    double lhs = 0.0;
    for (const auto& [j, a] : row.terms) lhs += a * x[j];
    switch (row.relation) {
      case Relation::less_equal:
        worst = std::max(worst, lhs - row.rhs);
        break;
      case Relation::greater_equal:
        worst = std::max(worst, row.rhs - lhs);
        break;
      case Relation::equal:
        worst = std::max(worst, std::abs(lhs - row.rhs));
        break;
    }
  }
  return worst;
}

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostringstream& os,
                 const std::vector<std::pair<std::size_t, double>>& terms,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& [j, a] : terms) {
    if (a == 0.0) continue;
    os << (a < 0 ? (first ? "-" : " - ") : (first ? "" : " + "))
       << number(std::abs(a)) << ' ' << names[j];
    first = false;
  }
  if (first) os << "0 " << (names.empty() ? "x" : names.front());
}

}  // namespace

std::string LinearProgram::to_lp_format() const {
  std::ostringstream os;
  os << "\\ ggospa linear program: " << num_variables() << " variables, "
     << num_constraints() << " constraints\n";
  os << "Minimize\n obj: ";
  std::vector<std::pair<std::size_t, double>> obj;
  for (std::size_t j = 0; j < cost_.size(); ++j) obj.emplace_back(j, cost_[j]);
  write_terms(os, obj, names_);
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < constraints_.size(); ++r) {
    const auto& row = constraints_[r];
    os << " c" << r << ": ";
    write_terms(os, row.terms, names_);
    switch (row.relation) {
      case Relation::less_equal:
        os << " <= ";
        break;
      case Relation::greater_equal:
        os << " >= ";
        break;
      case Relation::equal:
        os << " = ";
        break;
    }
    os << number(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    const bool lo = std::isfinite(lower_[j]);
    const bool hi = std::isfinite(upper_[j]);
    if (!lo && !hi) {
      os << ' ' << names_[j] << " free\n";
    } else if (lo && hi) {
      os << ' ' << number(lower_[j]) << " <= " << names_[j]
         << " <= " << number(upper_[j]) << '\n';
    } else if (lo) {
      os << ' ' << names_[j] << " >= " << number(lower_[j]) << '\n';
    } else {
      os << " -inf <= " << names_[j] << " <= " << number(upper_[j]) << '\n';
    }
  }
  if (std::find(integer_.begin(), integer_.end(), true) != integer_.end()) {
    os << "General\n";
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      if (integer_[j]) os << ' ' << names_[j] << '\n';
    }
  }
  os << "End\n";
  return os.str();
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
    case LpStatus::limit_reached:
      return "limit_reached";
  }
  return "?";
}

}  // namespace ggospa
