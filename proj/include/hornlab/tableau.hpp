#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hornlab/rational.hpp"
#include "hornlab/semiring.hpp"

namespace hornlab {

enum class TableauRole { hive, gz, tropical_gz };

inline std::string to_string(TableauRole role) {
  switch (role) {
    case TableauRole::hive: return "hive";
    case TableauRole::gz: return "gz";
    case TableauRole::tropical_gz: return "tropical-gz";
  }
  return "unknown";
}

/// Triangular array l^k_i, 0 <= i <= k <= n. Row k has k+1 entries.
template <class T>
class Tableau {
 public:
  Tableau() = default;
  Tableau(std::size_t n, TableauRole role, const T& fill = T(0)) : n_(n), role_(role) {
    rows_.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) rows_.emplace_back(k + 1, fill);
  }

  static Tableau from_rows(std::vector<std::vector<T>> rows, TableauRole role) {
    if (rows.empty()) throw std::invalid_argument("tableau needs at least row 0");
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (rows[k].size() != k + 1)
        throw std::invalid_argument("tableau row " + std::to_string(k) + " must have " +
                                    std::to_string(k + 1) + " entries");
    Tableau t;
    t.n_ = rows.size() - 1;
    t.role_ = role;
    t.rows_ = std::move(rows);
    return t;
  }

  std::size_t n() const { return n_; }
  TableauRole role() const { return role_; }
  void set_role(TableauRole role) { role_ = role; }

  T& at(std::size_t k, std::size_t i) { return rows_.at(k).at(i); }
  const T& at(std::size_t k, std::size_t i) const { return rows_.at(k).at(i); }

  const std::vector<T>& row(std::size_t k) const { return rows_.at(k); }
  std::vector<T>& row(std::size_t k) { return rows_.at(k); }
  const std::vector<std::vector<T>>& rows() const { return rows_; }

  /// Number of nodes (n+1)(n+2)/2.
  std::size_t size() const { return (n_ + 1) * (n_ + 2) / 2; }

  friend bool operator==(const Tableau& a, const Tableau& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t n_ = 0;
  TableauRole role_ = TableauRole::hive;
  std::vector<std::vector<T>> rows_;
};

/// GZ-style tableau from rows 1..n (row 0 and every l^k_0 are set to zero).
template <class T>
Tableau<T> gz_tableau_from_rows(const std::vector<std::vector<T>>& rows_without_zero,
                                TableauRole role = TableauRole::gz) {
  Tableau<T> t(rows_without_zero.size(), role, T(0));
  for (std::size_t k = 1; k <= t.n(); ++k) {
    const auto& r = rows_without_zero[k - 1];
    if (r.size() != k) throw std::invalid_argument("GZ row " + std::to_string(k) + " has wrong length");
    for (std::size_t i = 1; i <= k; ++i) t.at(k, i) = r[i - 1];
  }
  return t;
}

/// Drops tropical -inf tags; throws if any entry is -inf.
template <class T>
Tableau<T> finite_tableau(const Tableau<Tropical<T>>& t, TableauRole role = TableauRole::gz) {
  Tableau<T> out(t.n(), role, T(0));
  for (std::size_t k = 0; k <= t.n(); ++k)
    for (std::size_t i = 0; i <= k; ++i) out.at(k, i) = t.at(k, i).value();
  return out;
}

inline Tableau<double> to_double_tableau(const Tableau<Rational>& t) {
  Tableau<double> out(t.n(), t.role(), 0.0);
  for (std::size_t k = 0; k <= t.n(); ++k)
    for (std::size_t i = 0; i <= k; ++i) out.at(k, i) = t.at(k, i).get_d();
  return out;
}

inline Tableau<Rational> rationalize(const Tableau<double>& t) {
  Tableau<Rational> out(t.n(), t.role(), Rational(0));
  for (std::size_t k = 0; k <= t.n(); ++k)
    for (std::size_t i = 0; i <= k; ++i) out.at(k, i) = rational_from_double(t.at(k, i));
  return out;
}

}  // namespace hornlab
