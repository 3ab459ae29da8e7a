#pragma once

#include <compare>
#include <complex>
#include <concepts>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "hornlab/rational.hpp"

namespace hornlab {

/// Element of the max-plus semiring over T: a finite value or the bottom
/// element -inf. The bottom is a distinguished state, never an IEEE infinity.
template <class T>
class Tropical {
 public:
  Tropical() = default;  // -inf, the additive unit
  Tropical(T value) : finite_(true), value_(std::move(value)) {}  // NOLINT(implicit)

  static Tropical neg_inf() { return Tropical(); }

  bool is_finite() const { return finite_; }
  bool is_neg_inf() const { return !finite_; }

  const T& value() const {
    if (!finite_) throw std::domain_error("value() of tropical -inf");
    return value_;
  }

  friend bool operator==(const Tropical& a, const Tropical& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const Tropical& a, const Tropical& b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Tropical& t) {
    if (!t.finite_) return os << "-inf";
    return os << t.value_;
  }

 private:
  bool finite_ = false;
  T value_{};
};

/// An additive structure with zero/one, add (the semiring sum) and mul.
template <class S>
concept Semiring = requires(const typename S::value_type& a, const typename S::value_type& b) {
  { S::zero() } -> std::convertible_to<typename S::value_type>;
  { S::one() } -> std::convertible_to<typename S::value_type>;
  { S::add(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::mul(a, b) } -> std::convertible_to<typename S::value_type>;
};

/// A semiring with additive inverses; determinants make sense here.
template <class S>
concept Ring = Semiring<S> && requires(const typename S::value_type& a) {
  { S::neg(a) } -> std::convertible_to<typename S::value_type>;
};

/// (max, +) over T with -inf as zero and 0 as one.
template <class T>
struct TropicalSemiring {
  using value_type = Tropical<T>;
  static value_type zero() { return value_type::neg_inf(); }
  static value_type one() { return value_type(T(0)); }
  static value_type add(const value_type& a, const value_type& b) { return a < b ? b : a; }
  static value_type mul(const value_type& a, const value_type& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return value_type::neg_inf();
    return value_type(T(a.value() + b.value()));
  }
};

/// Nonnegative reals with ordinary + and *.
struct RealSemiring {
  using value_type = double;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a * b; }
};

struct ComplexRing {
  using value_type = std::complex<double>;
  static value_type zero() { return {0.0, 0.0}; }
  static value_type one() { return {1.0, 0.0}; }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type neg(const value_type& a) { return -a; }
};

struct RationalField {
  using value_type = Rational;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational add(const Rational& a, const Rational& b) { return a + b; }
  static Rational mul(const Rational& a, const Rational& b) { return a * b; }
  static Rational neg(const Rational& a) { return -a; }
};

using TropicalQ = Tropical<Rational>;
using TropicalQSemiring = TropicalSemiring<Rational>;

/// Tropical division, m_i - m_{i-1}; -inf whenever the numerator is -inf.
template <class T>
Tropical<T> tropical_difference(const Tropical<T>& a, const Tropical<T>& b) {
  if (a.is_neg_inf()) return Tropical<T>::neg_inf();
  if (b.is_neg_inf()) throw std::domain_error("finite minus -inf is +inf, outside the semiring");
  return Tropical<T>(T(a.value() - b.value()));
}

}  // namespace hornlab
