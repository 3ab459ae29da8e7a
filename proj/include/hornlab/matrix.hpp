#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "hornlab/rational.hpp"
#include "hornlab/semiring.hpp"

namespace hornlab {

/// Dense row-major matrix over an arbitrary element type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Semiring S>
Matrix<typename S::value_type> semiring_identity(std::size_t n) {
  Matrix<typename S::value_type> m(n, n, S::zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = S::one();
  return m;
}

/// Matrix product with the semiring's sum and product.
template <Semiring S>
Matrix<typename S::value_type> multiply(const Matrix<typename S::value_type>& a,
                                        const Matrix<typename S::value_type>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  Matrix<typename S::value_type> out(a.rows(), b.cols(), S::zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      auto acc = S::zero();
      for (std::size_t k = 0; k < a.cols(); ++k) acc = S::add(acc, S::mul(a(i, k), b(k, j)));
      out(i, j) = acc;
    }
  return out;
}

template <class T>
Matrix<T> submatrix(const Matrix<T>& m, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
  Matrix<T> out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

/// Determinant by Gaussian elimination. Exact for Rational (first nonzero
/// pivot); partial pivoting by modulus for floating types.
template <class T>
T determinant(Matrix<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  T det = T(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_same_v<T, Rational>) {
      for (std::size_t r = col; r < n; ++r)
        if (m(r, col) != 0) {
          pivot = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = col; r < n; ++r)
        if (std::abs(m(r, col)) > best) {
          best = std::abs(m(r, col));
          pivot = r;
        }
    }
    if (pivot == n) return T(0);
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == T(0)) continue;
      T factor = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

/// Exact inverse over the rationals; throws if singular.
inline Matrix<Rational> inverse(const Matrix<Rational>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = a.rows();
  Matrix<Rational> m = a;
  Matrix<Rational> inv = semiring_identity<RationalField>(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot == n) throw std::domain_error("inverse: singular matrix");
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(m(pivot, c), m(col, c));
      std::swap(inv(pivot, c), inv(col, c));
    }
    Rational p = m(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      m(col, c) /= p;
      inv(col, c) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) -= f * m(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

inline std::vector<Rational> matvec(const Matrix<Rational>& a, const std::vector<Rational>& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
  std::vector<Rational> y(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) y[i] += a(i, j) * x[j];
  return y;
}

}  // namespace hornlab
