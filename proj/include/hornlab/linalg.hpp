#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hornlab/gz_sampler.hpp"
#include "hornlab/matrix.hpp"
#include "hornlab/tableau.hpp"

namespace hornlab {

using Complex = std::complex<double>;
using ComplexMatrix = Matrix<Complex>;

inline ComplexMatrix identity_matrix(std::size_t n) { return semiring_identity<ComplexRing>(n); }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply<ComplexRing>(a, b);
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

inline ComplexMatrix diagonal_matrix(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size(), Complex(0.0));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

inline ComplexMatrix principal_block(const ComplexMatrix& a, std::size_t start, std::size_t size) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), start);
  return submatrix(a, idx, idx);
}

/// ComplexMatrix known to satisfy K = K*. Construction checks symmetry to
/// 1e-10 (relative) and then symmetrizes exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m, double tol = 1e-10) {
    if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: not square");
    const double scale = std::max(1.0, frobenius_norm(m));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = i; j < m.cols(); ++j) {
        if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
          throw std::invalid_argument("HermitianMatrix: non-finite entry");
        if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * scale)
          throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
        Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
        if (i == j) avg = avg.real();
        m(i, j) = avg;
        m(j, i) = std::conj(avg);
      }
    m_ = std::move(m);
  }

  std::size_t n() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

/// Upper-triangular with strictly positive real diagonal.
class UpperTriangular {
 public:
  explicit UpperTriangular(ComplexMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("UpperTriangular: not square");
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (m(i, j) != Complex(0.0)) throw std::invalid_argument("UpperTriangular: nonzero below the diagonal");
      if (!(m(i, i).real() > 0.0) || std::abs(m(i, i).imag()) > 1e-12 * m(i, i).real())
        throw std::invalid_argument("UpperTriangular: diagonal must be positive real");
      m(i, i) = m(i, i).real();
    }
    m_ = std::move(m);
  }

  std::size_t n() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column i belongs to values[i]
};

/// Cyclic complex Jacobi. Each rotation first turns the pivot entry real by
/// a phase on column q, then applies the real symmetric Jacobi rotation.
inline EigenDecomposition eigh(const HermitianMatrix& k) {
  const std::size_t n = k.n();
  ComplexMatrix a = k.matrix();
  ComplexMatrix v = identity_matrix(n);
  const double norm = frobenius_norm(a);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  const double tol = 1e-13 * norm;
  std::size_t sweep = 0;
  while (norm > 0.0 && off_norm() > tol) {
    if (++sweep > 100) throw std::runtime_error("eigh: Jacobi iteration did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double beta = std::abs(a(p, q));
        if (beta == 0.0) continue;
        const Complex psi = a(p, q) / beta;
        const double alpha = a(p, p).real(), gamma = a(q, q).real();
        const double theta = (gamma - alpha) / (2.0 * beta);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(psi)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex gpp = c, gpq = s, gqp = -s * std::conj(psi), gqq = c * std::conj(psi);
        for (std::size_t r = 0; r < n; ++r) {
          Complex x = a(r, p), y = a(r, q);
          a(r, p) = x * gpp + y * gqp;
          a(r, q) = x * gpq + y * gqq;
          x = v(r, p);
          y = v(r, q);
          v(r, p) = x * gpp + y * gqp;
          v(r, q) = x * gpq + y * gqq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          Complex x = a(p, col), y = a(q, col);
          a(p, col) = std::conj(gpp) * x + std::conj(gqp) * y;
          a(q, col) = std::conj(gpq) * x + std::conj(gqq) * y;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

inline std::vector<double> eigenvalues(const HermitianMatrix& k) { return eigh(k).values; }

/// Cumulative sums of the descending spectrum.
inline std::vector<double> l_map(const HermitianMatrix& k) { return cumulative(eigenvalues(k)); }

namespace detail {

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline double log_top_singular_value(const ComplexMatrix& c) {
  if (c.rows() == 1 && c.cols() == 1) return std::log(std::abs(c(0, 0)));
  // Rescale first so that C C* cannot overflow.
  double scale = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) scale = std::max(scale, std::abs(c(i, j)));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::domain_error("singular or non-finite matrix");
  ComplexMatrix s = c;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) s(i, j) /= scale;
  auto ev = eigh(HermitianMatrix(s * adjoint(s), 1e-8));
  if (!(ev.values[0] > 0.0)) throw std::domain_error("singular matrix");
  return 0.5 * std::log(ev.values[0]) + std::log(scale);
}

}  // namespace detail

/// C_k(A): the matrix of k x k minors, rows and columns in lexicographic
/// order of index subsets.
inline ComplexMatrix compound_matrix(const ComplexMatrix& a, std::size_t k) {
  if (a.rows() != a.cols()) throw std::invalid_argument("compound_matrix: not square");
  auto sets = detail::subsets(a.rows(), k);
  ComplexMatrix c(sets.size(), sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j) c(i, j) = determinant(submatrix(a, sets[i], sets[j]));
  return c;
}

/// l^B_i = log of the top singular value of C_i; equivalently half the sum
/// of the i largest log-eigenvalues of (compound_i) * compound_i^*. Taking
/// one compound per i keeps every entry accurate to relative precision,
/// even when the singular values span many orders of magnitude.
inline std::vector<double> singular_l_from_compounds(const std::vector<ComplexMatrix>& compounds) {
  std::vector<double> l;
  for (const auto& c : compounds) {
    double v = detail::log_top_singular_value(c);
    if (!std::isfinite(v)) throw std::domain_error("singular_l: matrix is singular");
    l.push_back(v);
  }
  return l;
}

inline std::vector<double> singular_l(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("singular_l: need a square matrix");
  std::vector<ComplexMatrix> compounds;
  for (std::size_t k = 1; k <= a.rows(); ++k) compounds.push_back(compound_matrix(a, k));
  return singular_l_from_compounds(compounds);
}

/// sigma_i = sum of |i x i minors|^2 = e_i(eigenvalues of A A*).
inline std::vector<double> sigma_values(const ComplexMatrix& a) {
  std::vector<double> s;
  for (std::size_t k = 1; k <= a.rows(); ++k) {
    double f = frobenius_norm(compound_matrix(a, k));
    s.push_back(f * f);
  }
  return s;
}

/// Row k: l_map of the leading k x k block.
inline Tableau<double> gz_H(const HermitianMatrix& k) {
  const std::size_t n = k.n();
  Tableau<double> t(n, TableauRole::gz, 0.0);
  for (std::size_t r = 1; r <= n; ++r) {
    auto row = l_map(HermitianMatrix(principal_block(k.matrix(), 0, r)));
    for (std::size_t i = 1; i <= r; ++i) t.at(r, i) = row[i - 1];
  }
  return t;
}

enum class BlockConvention { trailing, leading };

/// Row k: singular_l of the trailing (default) or leading k x k block.
inline Tableau<double> gz_B(const UpperTriangular& a, BlockConvention conv = BlockConvention::trailing) {
  const std::size_t n = a.n();
  Tableau<double> t(n, TableauRole::gz, 0.0);
  for (std::size_t r = 1; r <= n; ++r) {
    std::size_t start = conv == BlockConvention::trailing ? n - r : 0;
    auto row = singular_l(principal_block(a.matrix(), start, r));
    for (std::size_t i = 1; i <= r; ++i) t.at(r, i) = row[i - 1];
  }
  return t;
}

inline Complex complex_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double re = normal(rng);
  double im = normal(rng);
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

/// Haar unitary: Gram-Schmidt (with one reorthogonalization pass) of a
/// complex Gaussian matrix, i.e. the Q of a QR factorization whose R has a
/// positive diagonal.
inline ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix z(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) z(i, j) = complex_normal(rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < j; ++p) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(z(i, p)) * z(i, j);
        for (std::size_t i = 0; i < n; ++i) z(i, j) -= dot * z(i, p);
      }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(z(i, j));
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::runtime_error("haar_unitary: degenerate Gaussian draw");
    for (std::size_t i = 0; i < n; ++i) z(i, j) /= norm;
  }
  return z;
}

/// U diag(lambda) U* with Haar U, lambda the differences of r.
inline HermitianMatrix sample_H_r(const std::vector<double>& r, Rng& rng) {
  if (r.empty()) throw std::invalid_argument("sample_H_r: empty spectrum");
  auto lambda = differences(r);
  ComplexMatrix u = haar_unitary(r.size(), rng);
  return HermitianMatrix(u * diagonal_matrix(lambda) * adjoint(u));
}

/// Angles for rows k = 1..n-1 of a tableau; row k carries k angles.
using GZAngles = std::vector<std::vector<double>>;

inline GZAngles zero_angles(std::size_t n) {
  GZAngles g;
  for (std::size_t k = 1; k < n; ++k) g.emplace_back(k, 0.0);
  return g;
}

inline GZAngles uniform_angles(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
  GZAngles g;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> row(k);
    for (auto& a : row) a = uni(rng);
    g.push_back(std::move(row));
  }
  return g;
}

namespace detail {

inline void check_angles(const GZAngles& angles, std::size_t n) {
  if (angles.size() + 1 != std::max<std::size_t>(n, 1))
    throw std::invalid_argument("angles: need rows 1..n-1");
  for (std::size_t k = 1; k < n; ++k)
    if (angles[k - 1].size() != k) throw std::invalid_argument("angles: row k must have k entries");
}

/// Arrow-matrix border: given the spectrum mu of the current block and the
/// target spectrum lambda (strictly interlacing), the corner entry and the
/// border coefficients in the eigenbasis of the block.
inline std::pair<double, std::vector<Complex>> border(const std::vector<double>& mu, const std::vector<double>& lambda,
                                                      const std::vector<double>& angles) {
  const std::size_t k = mu.size();
  double corner = 0.0;
  for (double x : lambda) corner += x;
  for (double x : mu) corner -= x;
  std::vector<Complex> beta(k);
  for (std::size_t j = 0; j < k; ++j) {
    double num = 1.0, den = 1.0;
    for (std::size_t i = 0; i <= k; ++i) num *= mu[j] - lambda[i];
    for (std::size_t i = 0; i < k; ++i)
      if (i != j) den *= mu[j] - mu[i];
    double w = -num / den;
    if (!(w > 0.0)) throw std::domain_error("reconstruct: interlacing is not strict");
    beta[j] = std::polar(std::sqrt(w), angles[j]);
  }
  return {corner, beta};
}

inline void check_strict(const std::vector<double>& mu, const std::vector<double>& lambda) {
  for (std::size_t j = 0; j < mu.size(); ++j)
    if (!(lambda[j] > mu[j] && mu[j] > lambda[j + 1]))
      throw std::domain_error("reconstruct: interlacing is not strict");
}

/// Builds a Hermitian matrix whose nested blocks have the spectra rows[k]
/// (rows[0] has one entry). `at_end` appends each border as the last
/// row/column, so leading blocks carry the spectra; otherwise borders are
/// prepended and trailing blocks carry them.
inline ComplexMatrix bordered_matrix(const std::vector<std::vector<double>>& spectra, const GZAngles& angles,
                                     bool at_end) {
  const std::size_t n = spectra.size();
  ComplexMatrix cur(1, 1, Complex(spectra[0][0]));
  for (std::size_t k = 1; k < n; ++k) {
    const auto& mu = spectra[k - 1];
    const auto& lambda = spectra[k];
    check_strict(mu, lambda);
    auto dec = eigh(HermitianMatrix(cur, 1e-8));
    auto [corner, beta] = border(dec.values, lambda, angles[k - 1]);
    std::vector<Complex> b(k, Complex(0.0));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t j = 0; j < k; ++j) b[r] += dec.vectors(r, j) * beta[j];
    ComplexMatrix next(k + 1, k + 1);
    const std::size_t off = at_end ? 0 : 1;
    const std::size_t edge = at_end ? k : 0;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) next(r + off, c + off) = cur(r, c);
    for (std::size_t r = 0; r < k; ++r) {
      next(r + off, edge) = b[r];
      next(edge, r + off) = std::conj(b[r]);
    }
    next(edge, edge) = corner;
    cur = std::move(next);
  }
  return cur;
}

inline std::vector<std::vector<double>> row_spectra(const Tableau<double>& xi) {
  std::vector<std::vector<double>> spectra;
  for (std::size_t k = 1; k <= xi.n(); ++k) {
    std::vector<double> row(xi.row(k).begin() + 1, xi.row(k).end());
    spectra.push_back(differences(row));
  }
  return spectra;
}

}  // namespace detail

/// Hermitian matrix with gz_H(K) = xi; the border of stage k gets the
/// phases angles[k-1]. Requires strict interlacing.
inline HermitianMatrix reconstruct_H(const Tableau<double>& xi, const GZAngles& angles) {
  if (xi.n() == 0) throw std::invalid_argument("reconstruct_H: empty tableau");
  detail::check_angles(angles, xi.n());
  return HermitianMatrix(detail::bordered_matrix(detail::row_spectra(xi), angles, true), 1e-8);
}

/// A = J chol(J P J) J: upper-triangular with positive diagonal, A A* = P.
inline UpperTriangular upper_cholesky(const HermitianMatrix& p) {
  const std::size_t n = p.n();
  // Work on the reversed matrix Q = J P J and factor Q = L L*.
  auto q = [&](std::size_t i, std::size_t j) { return p(n - 1 - i, n - 1 - j); };
  ComplexMatrix l(n, n, Complex(0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double d = q(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw std::domain_error("upper_cholesky: matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = q(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j).real();
    }
  }
  ComplexMatrix a(n, n, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = l(n - 1 - i, n - 1 - j);
  return UpperTriangular(std::move(a));
}

/// Upper-triangular A with gz_B(A) = xi (trailing convention): the positive
/// matrix P = A A* is bordered at the front so that its trailing blocks
/// have eigenvalues exp(2 * row differences), then A = upper_cholesky(P).
inline UpperTriangular reconstruct_B(const Tableau<double>& xi, const GZAngles& angles) {
  if (xi.n() == 0) throw std::invalid_argument("reconstruct_B: empty tableau");
  detail::check_angles(angles, xi.n());
  auto spectra = detail::row_spectra(xi);
  for (auto& row : spectra)
    for (auto& x : row) x = std::exp(2.0 * x);
  return upper_cholesky(HermitianMatrix(detail::bordered_matrix(spectra, angles, false), 1e-8));
}

/// Liouville sampler on B_r: uniform GZ pattern from a P_r chain plus
/// uniform angles, pushed through reconstruct_B.
class BSampler {
 public:
  explicit BSampler(std::vector<double> r, PolytopeSampler::Options opt = {}) : n_(r.size()), chain_(r, opt) {}

  UpperTriangular next(Rng& rng) {
    Tableau<double> u = chain_.next(rng);
    GZAngles angles = uniform_angles(n_, rng);
    return reconstruct_B(u, angles);
  }

 private:
  std::size_t n_;
  PolytopeSampler chain_;
};

class HSampler {
 public:
  explicit HSampler(std::vector<double> r) : r_(std::move(r)) {}
  HermitianMatrix next(Rng& rng) const { return sample_H_r(r_, rng); }

 private:
  std::vector<double> r_;
};

inline UpperTriangular sample_B_r(const std::vector<double>& r, Rng& rng) {
  BSampler s(r);
  return s.next(rng);
}

}  // namespace hornlab
