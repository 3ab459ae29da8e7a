#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "hornlab/hive.hpp"
#include "hornlab/tableau.hpp"

namespace hornlab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Eigenvalues from a cumulative vector r: lambda_i = r_i - r_{i-1}.
inline std::vector<double> differences(const std::vector<double>& r) {
  std::vector<double> d(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) d[i] = i == 0 ? r[0] : r[i] - r[i - 1];
  return d;
}

inline std::vector<double> cumulative(const std::vector<double>& lambda) {
  std::vector<double> r(lambda.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) r[i] = acc += lambda[i];
  return r;
}

inline bool strictly_decreasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i - 1] > x[i])) return false;
  return true;
}

/// Hit-and-run chain on the GZ polytope P_r: rows 1..n-1 of a GZ tableau
/// whose top row is the cumulative vector r.
class PolytopeSampler {
 public:
  struct Options {
    std::size_t burn_in = 1000;
    std::size_t thinning = 50;
  };

  PolytopeSampler(std::vector<double> r, Options opt) : r_(std::move(r)), opt_(opt) {
    n_ = r_.size();
    if (n_ == 0) throw std::invalid_argument("PolytopeSampler: empty top row");
    for (double x : r_)
      if (!std::isfinite(x)) throw std::invalid_argument("PolytopeSampler: non-finite top row");
    if (!strictly_decreasing(differences(r_)))
      throw std::domain_error("PolytopeSampler: degenerate spectrum, P_r is not full-dimensional");
    dim_ = n_ * (n_ - 1) / 2;
    build_constraints();
    start_point();
  }
  explicit PolytopeSampler(std::vector<double> r) : PolytopeSampler(std::move(r), Options{}) {}

  std::size_t dimension() const { return dim_; }
  const std::vector<double>& top_row() const { return r_; }

  /// Next thinned sample; the first call also runs the burn-in.
  Tableau<double> next(Rng& rng) {
    if (!burned_) {
      for (std::size_t s = 0; s < opt_.burn_in; ++s) step(rng);
      burned_ = true;
    }
    for (std::size_t s = 0; s < opt_.thinning; ++s) step(rng);
    return tableau();
  }

  std::vector<Tableau<double>> sample(std::size_t count, Rng& rng) {
    std::vector<Tableau<double>> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) out.push_back(next(rng));
    return out;
  }

  Tableau<double> tableau() const {
    Tableau<double> t(n_, TableauRole::gz, 0.0);
    for (std::size_t i = 1; i <= n_; ++i) t.at(n_, i) = r_[i - 1];
    for (std::size_t k = 1; k < n_; ++k)
      for (std::size_t i = 1; i <= k; ++i) t.at(k, i) = x_[coord(k, i)];
    return t;
  }

 private:
  // Linear constraint  a . x >= b  on the free coordinates.
  struct Constraint {
    std::vector<std::pair<std::size_t, double>> a;
    double b;
  };

  static std::size_t coord(std::size_t k, std::size_t i) { return (k - 1) * k / 2 + (i - 1); }

  void build_constraints() {
    for (const auto& r : rhombus_inequalities(n_, false)) {
      Constraint c{{}, 0.0};
      for (const auto& term : r.terms) {
        if (term.i == 0) continue;  // l^k_0 = 0
        if (term.k == n_)
          c.b -= term.sign * r_[term.i - 1];
        else
          c.a.push_back({coord(term.k, term.i), static_cast<double>(term.sign)});
      }
      cons_.push_back(std::move(c));
    }
  }

  // Interlacing midpoints, built top-down in eigenvalue coordinates.
  void start_point() {
    x_.assign(dim_, 0.0);
    std::vector<double> lam = differences(r_);
    for (std::size_t k = n_ - 1; k >= 1; --k) {
      std::vector<double> mu(k);
      for (std::size_t i = 0; i < k; ++i) mu[i] = 0.5 * (lam[i] + lam[i + 1]);
      std::vector<double> row = cumulative(mu);
      for (std::size_t i = 1; i <= k; ++i) x_[coord(k, i)] = row[i - 1];
      lam = mu;
    }
  }

  void step(Rng& rng) {
    if (dim_ == 0) return;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> d(dim_);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : d) {
        v = normal(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : d) v /= norm;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& c : cons_) {
      double ad = 0.0, ax = 0.0;
      for (const auto& [j, coef] : c.a) {
        ad += coef * d[j];
        ax += coef * x_[j];
      }
      double slack = ax - c.b;  // >= 0 inside
      if (ad > 0.0)
        lo = std::max(lo, -slack / ad);
      else if (ad < 0.0)
        hi = std::min(hi, -slack / ad);
    }
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::logic_error("hit-and-run chord is empty or unbounded");
    // Pull the endpoints slightly inward so samples stay strictly interior.
    double shrink = 1e-9 * (hi - lo);
    std::uniform_real_distribution<double> uni(lo + shrink, hi - shrink);
    double t = uni(rng);
    for (std::size_t j = 0; j < dim_; ++j) x_[j] += t * d[j];
  }

  std::vector<double> r_;
  Options opt_;
  std::size_t n_ = 0, dim_ = 0;
  std::vector<Constraint> cons_;
  std::vector<double> x_;
  bool burned_ = false;
};

/// Independent uniform samples on P_r from a fresh chain.
inline std::vector<Tableau<double>> sample_P_r(const std::vector<double>& r, std::size_t count, Rng& rng,
                                               PolytopeSampler::Options opt = {}) {
  PolytopeSampler chain(r, opt);
  return chain.sample(count, rng);
}

}  // namespace hornlab
