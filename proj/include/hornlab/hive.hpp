#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hornlab/rational.hpp"
#include "hornlab/semiring.hpp"
#include "hornlab/simplex.hpp"
#include "hornlab/tableau.hpp"

namespace hornlab {

/// (a, b, c): cumulative spectra of two summands and of their sum.
template <class T>
struct HornTriple {
  std::vector<T> a, b, c;

  std::size_t n() const { return a.size(); }

  void validate() const {
    if (a.empty() || b.size() != a.size() || c.size() != a.size())
      throw std::invalid_argument("Horn triple components must have equal positive length");
  }

  friend bool operator==(const HornTriple& x, const HornTriple& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
};

inline HornTriple<Rational> rationalize(const HornTriple<double>& t) {
  return {rationalize(t.a), rationalize(t.b), rationalize(t.c)};
}

inline HornTriple<double> to_doubles(const HornTriple<Rational>& t) {
  return {to_doubles(t.a), to_doubles(t.b), to_doubles(t.c)};
}

template <class T>
HornTriple<T> scale_triple(const HornTriple<T>& t, const T& tau) {
  if (!(tau > 0)) throw std::invalid_argument("scale_triple: tau must be positive");
  HornTriple<T> out = t;
  for (auto* v : {&out.a, &out.b, &out.c})
    for (auto& x : *v) x = T(x * tau);
  return out;
}

/// One linear inequality of the rhombus families, as lhs - rhs >= 0 over
/// tableau nodes (k, i).
struct Rhombus {
  struct Term {
    std::size_t k, i;
    int sign;
  };
  Term terms[4];
  int family;  // 1, 2 or 3
  std::size_t k, i;
};

/// The rhombus inequalities for 0 < i <= k < n. Families 1 and 2 are the
/// interlacing inequalities; family 3 completes the hive conditions.
inline std::vector<Rhombus> rhombus_inequalities(std::size_t n, bool include_third_family = true) {
  std::vector<Rhombus> out;
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 1; i <= k; ++i) {
      out.push_back({{{k + 1, i, 1}, {k, i - 1, 1}, {k + 1, i - 1, -1}, {k, i, -1}}, 1, k, i});
      out.push_back({{{k + 1, i, 1}, {k, i, 1}, {k + 1, i + 1, -1}, {k, i - 1, -1}}, 2, k, i});
      if (include_third_family)
        out.push_back({{{k, i, 1}, {k, i - 1, 1}, {k + 1, i, -1}, {k - 1, i - 1, -1}}, 3, k, i});
    }
  return out;
}

template <class T>
T rhombus_margin(const Tableau<T>& t, const Rhombus& r) {
  T v = T(0);
  for (const auto& term : r.terms) {
    if (term.sign > 0)
      v += t.at(term.k, term.i);
    else
      v -= t.at(term.k, term.i);
  }
  return v;
}

/// All three families hold with lhs - rhs >= -slack.
template <class T>
bool hive_check(const Tableau<T>& t, const T& slack = T(0)) {
  for (const auto& r : rhombus_inequalities(t.n()))
    if (rhombus_margin(t, r) < -slack) return false;
  return true;
}

/// a_i = l^n_i,  b_i = l^{n-i}_{n-i} - l^n_n,  c_i = l^{n-i}_0.
template <class T>
HornTriple<T> boundary(const Tableau<T>& t) {
  const std::size_t n = t.n();
  if (n == 0) throw std::invalid_argument("boundary: tableau of size 0");
  HornTriple<T> h;
  for (std::size_t i = 1; i <= n; ++i) {
    h.a.push_back(t.at(n, i));
    h.b.push_back(T(t.at(n - i, n - i) - t.at(n, n)));
    h.c.push_back(t.at(n - i, 0));
  }
  return h;
}

/// Minimal interlacing margin; +inf-like sentinel is avoided by returning
/// nullopt for n = 1 (no inequalities).
template <class T>
std::optional<T> gz_min_margin(const Tableau<T>& t) {
  std::optional<T> best;
  for (const auto& r : rhombus_inequalities(t.n(), false)) {
    T m = rhombus_margin(t, r);
    if (!best || m < *best) best = m;
  }
  return best;
}

/// delta == 0: the interlacing inequalities with l^k_0 = 0, each allowed to
/// fail by at most `slack`. delta > 0: every margin strictly exceeds delta.
template <class T>
bool gz_check(const Tableau<T>& t, const T& delta = T(0), const T& slack = T(0)) {
  if (delta < 0) throw std::invalid_argument("gz_check: delta must be nonnegative");
  for (std::size_t k = 0; k <= t.n(); ++k) {
    const T& z = t.at(k, 0);
    if (z > slack || z < -slack) return false;
  }
  for (const auto& r : rhombus_inequalities(t.n(), false)) {
    T m = rhombus_margin(t, r);
    if (delta > 0 ? !(m > delta) : m < -slack) return false;
  }
  return true;
}

template <class T>
bool gz_check(const Tableau<Tropical<T>>& t, const T& delta = T(0)) {
  for (const auto& row : t.rows())
    for (const auto& v : row)
      if (!v.is_finite()) return false;
  return gz_check(finite_tableau(t), delta);
}

inline std::size_t tableau_index(std::size_t k, std::size_t i) { return k * (k + 1) / 2 + i; }

/// The LP behind kt_member: tableau nodes are variables, the boundary nodes
/// are pinned to the triple and every rhombus inequality is relaxed by eps.
/// l^n_0 stays free. l^0_0 is pinned to c_n.
inline FeasibilityProblem kt_problem(const HornTriple<Rational>& h, const Rational& eps) {
  h.validate();
  const std::size_t n = h.n();
  FeasibilityProblem p;
  p.num_variables = tableau_index(n, n) + 1;
  for (std::size_t i = 1; i <= n; ++i) {
    p.pinned[tableau_index(n, i)] = h.a[i - 1];
    p.pinned[tableau_index(n - i, 0)] = h.c[i - 1];
  }
  for (std::size_t i = 1; i < n; ++i) p.pinned[tableau_index(n - i, n - i)] = h.b[i - 1] + h.a[n - 1];
  for (const auto& r : rhombus_inequalities(n)) {
    LinearConstraint c;
    for (const auto& term : r.terms) c.coeffs.push_back({tableau_index(term.k, term.i), Rational(term.sign)});
    c.constant = eps;
    p.constraints.push_back(std::move(c));
  }
  return p;
}

inline bool hyperplane_ok(const HornTriple<Rational>& h, const Rational& eps) {
  const std::size_t n = h.n();
  Rational gap = h.a[n - 1] + h.b[n - 1] - h.c[n - 1];
  return abs(gap) <= abs(eps);
}

/// A hive witnessing membership of the triple in the Knutson-Tao cone, or
/// nullopt. The hyperplane condition is checked to |eps|; a negative eps
/// tightens the rhombus inequalities instead of relaxing them.
inline std::optional<Tableau<Rational>> kt_solve(const HornTriple<Rational>& h, const Rational& eps = Rational(0)) {
  h.validate();
  if (!hyperplane_ok(h, eps)) return std::nullopt;
  auto x = solve_feasibility(kt_problem(h, eps));
  if (!x) return std::nullopt;
  const std::size_t n = h.n();
  Tableau<Rational> t(n, TableauRole::hive, Rational(0));
  for (std::size_t k = 0; k <= n; ++k)
    for (std::size_t i = 0; i <= k; ++i) t.at(k, i) = (*x)[tableau_index(k, i)];
  return t;
}

inline bool kt_member(const HornTriple<Rational>& h, const Rational& eps = Rational(0)) {
  return kt_solve(h, eps).has_value();
}

inline const Rational& default_numeric_slack() {
  static const Rational eps(1, 100000000);
  return eps;
}

/// Numeric triples are rationalized exactly; default slack 1e-8.
inline bool kt_member(const HornTriple<double>& h, const Rational& eps = default_numeric_slack()) {
  return kt_member(rationalize(h), eps);
}

}  // namespace hornlab
