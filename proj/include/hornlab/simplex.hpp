#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hornlab/rational.hpp"

namespace hornlab {

/// sum(coeffs) + constant >= 0, or == 0 when `equality` is set.
struct LinearConstraint {
  std::vector<std::pair<std::size_t, Rational>> coeffs;
  Rational constant;
  bool equality = false;
};

/// Feasibility of a system of linear constraints over free rational
/// variables. Pinned variables are substituted before solving.
struct FeasibilityProblem {
  std::size_t num_variables = 0;
  std::map<std::size_t, Rational> pinned;
  std::vector<LinearConstraint> constraints;
};

namespace detail {

/// Phase-1 simplex with Bland's rule on a dense exact tableau.
/// Rows: A y = rhs (rhs >= 0), y >= 0. Returns y or nullopt if infeasible.
class Phase1 {
 public:
  Phase1(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs, std::vector<long> initial_basis)
      : m_(a.size()), cols_(a.empty() ? 0 : a[0].size()) {
    // Rows lacking a usable basic column get an artificial variable.
    std::size_t art = 0;
    for (long b : initial_basis)
      if (b < 0) ++art;
    total_ = cols_ + art;
    tab_.assign(m_, std::vector<Rational>(total_ + 1, Rational(0)));
    basis_.resize(m_);
    std::size_t next = cols_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) tab_[i][j] = a[i][j];
      tab_[i][total_] = rhs[i];
      if (initial_basis[i] < 0) {
        tab_[i][next] = 1;
        basis_[i] = next++;
      } else {
        basis_[i] = static_cast<std::size_t>(initial_basis[i]);
      }
    }
    cost_.assign(total_ + 1, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= cols_)
        for (std::size_t j = 0; j <= total_; ++j)
          if (j < cols_ || j == total_) cost_[j] -= tab_[i][j];
  }

  std::optional<std::vector<Rational>> solve() {
    for (;;) {
      std::size_t enter = total_;
      for (std::size_t j = 0; j < total_; ++j)
        if (sgn(cost_[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == total_) break;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(tab_[i][enter]) <= 0) continue;
        Rational ratio = tab_[i][total_] / tab_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) throw std::logic_error("phase-1 objective unbounded");
      pivot(leave, enter);
    }
    if (sgn(cost_[total_]) != 0) return std::nullopt;
    std::vector<Rational> y(cols_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < cols_) y[basis_[i]] = tab_[i][total_];
    return y;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    Rational p = tab_[r][c];
    for (auto& v : tab_[r]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(tab_[i][c]) == 0) continue;
      Rational f = tab_[i][c];
      for (std::size_t j = 0; j <= total_; ++j)
        if (sgn(tab_[r][j]) != 0) tab_[i][j] -= f * tab_[r][j];
    }
    if (sgn(cost_[c]) != 0) {
      Rational f = cost_[c];
      for (std::size_t j = 0; j <= total_; ++j)
        if (sgn(tab_[r][j]) != 0) cost_[j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  std::size_t m_, cols_, total_ = 0;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Returns a feasible assignment of all variables (pins included), or
/// nullopt when the system is infeasible. Exact; terminates by Bland's rule.
inline std::optional<std::vector<Rational>> solve_feasibility(const FeasibilityProblem& p) {
  std::vector<long> free_index(p.num_variables, -1);
  std::size_t nf = 0;
  for (std::size_t v = 0; v < p.num_variables; ++v)
    if (!p.pinned.count(v)) free_index[v] = static_cast<long>(nf++);
  for (const auto& [v, val] : p.pinned)
    if (v >= p.num_variables) throw std::out_of_range("pinned variable out of range");

  // Reduce each constraint to  sum a_j x_j (free) + const (>= or ==) 0.
  struct Row {
    std::vector<Rational> a;
    Rational constant;
    bool equality;
  };
  std::vector<Row> rows;
  for (const auto& c : p.constraints) {
    Row r{std::vector<Rational>(nf, Rational(0)), c.constant, c.equality};
    for (const auto& [v, coef] : c.coeffs) {
      if (v >= p.num_variables) throw std::out_of_range("constraint variable out of range");
      auto pin = p.pinned.find(v);
      if (pin != p.pinned.end())
        r.constant += coef * pin->second;
      else
        r.a[static_cast<std::size_t>(free_index[v])] += coef;
    }
    bool trivial = true;
    for (const auto& q : r.a)
      if (sgn(q) != 0) trivial = false;
    if (trivial) {
      if (r.equality ? sgn(r.constant) != 0 : sgn(r.constant) < 0) return std::nullopt;
      continue;
    }
    rows.push_back(std::move(r));
  }

  // Columns: p_j, q_j (x_j = p_j - q_j), then one surplus per inequality.
  std::size_t n_ineq = 0;
  for (const auto& r : rows)
    if (!r.equality) ++n_ineq;
  const std::size_t cols = 2 * nf + n_ineq;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  std::vector<long> basis;
  std::size_t surplus = 2 * nf;
  for (const auto& r : rows) {
    std::vector<Rational> row(cols, Rational(0));
    for (std::size_t j = 0; j < nf; ++j) {
      row[2 * j] = r.a[j];
      row[2 * j + 1] = -r.a[j];
    }
    // a x - s = -const  (s >= 0 for inequalities).
    Rational b = -r.constant;
    long slack_col = -1;
    if (!r.equality) {
      slack_col = static_cast<long>(surplus);
      row[surplus++] = -1;
    }
    long basic = -1;
    if (sgn(b) < 0) {
      for (auto& v : row) v = -v;
      b = -b;
      basic = slack_col;  // now +1 on the surplus column
    }
    a.push_back(std::move(row));
    rhs.push_back(std::move(b));
    basis.push_back(basic);
  }
  if (rows.empty()) {
    std::vector<Rational> x(p.num_variables, Rational(0));
    for (const auto& [v, val] : p.pinned) x[v] = val;
    return x;
  }
  detail::Phase1 solver(std::move(a), std::move(rhs), std::move(basis));
  auto y = solver.solve();
  if (!y) return std::nullopt;
  std::vector<Rational> x(p.num_variables, Rational(0));
  for (std::size_t v = 0; v < p.num_variables; ++v) {
    auto pin = p.pinned.find(v);
    if (pin != p.pinned.end()) {
      x[v] = pin->second;
    } else {
      std::size_t j = static_cast<std::size_t>(free_index[v]);
      x[v] = (*y)[2 * j] - (*y)[2 * j + 1];
    }
  }
  return x;
}

}  // namespace hornlab
