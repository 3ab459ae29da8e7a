#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hornlab/gz_sampler.hpp"
#include "hornlab/hive.hpp"
#include "hornlab/linalg.hpp"
#include "hornlab/paths.hpp"
#include "hornlab/tropical_horn.hpp"

namespace hornlab {

enum class Generator { hermitian_sum, multiplicative, tropical_kappa };

inline std::string to_string(Generator g) {
  switch (g) {
    case Generator::hermitian_sum: return "hermitian-sum";
    case Generator::multiplicative: return "multiplicative";
    case Generator::tropical_kappa: return "tropical-kappa";
  }
  return "unknown";
}

inline Generator generator_from_string(const std::string& s) {
  if (s == "hermitian" || s == "hermitian-sum") return Generator::hermitian_sum;
  if (s == "multiplicative") return Generator::multiplicative;
  if (s == "tropical" || s == "tropical-kappa") return Generator::tropical_kappa;
  throw std::invalid_argument("unknown generator: " + s);
}

struct SamplingOptions {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t chunk_size = 1000;
};

/// Seeded sample of vectors in R^n. Chunk c of the sample is produced by
/// an independent stream seeded with derive_seed(seed, c), so the content
/// does not depend on how chunks are scheduled over threads.
struct EmpiricalSample {
  Generator generator = Generator::hermitian_sum;
  std::uint64_t seed = 0;
  std::size_t chunk_size = 0;
  std::vector<double> r, s;
  std::vector<std::vector<double>> rows;

  std::size_t count() const { return rows.size(); }
  std::size_t dimension() const { return r.size(); }
};

namespace detail {

using ChunkFn = std::function<std::vector<std::vector<double>>(std::size_t chunk, std::size_t size, Rng& rng)>;

inline std::vector<std::vector<double>> run_chunks(std::size_t count, const SamplingOptions& opt, const ChunkFn& fn) {
  if (opt.chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  const std::size_t chunks = (count + opt.chunk_size - 1) / opt.chunk_size;
  std::vector<std::vector<std::vector<double>>> parts(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        Rng rng(derive_seed(opt.seed, c));
        std::size_t size = std::min(opt.chunk_size, count - c * opt.chunk_size);
        parts[c] = fn(c, size, rng);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(opt.threads, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<std::vector<double>> rows;
  rows.reserve(count);
  for (auto& p : parts)
    for (auto& row : p) rows.push_back(std::move(row));
  return rows;
}

inline void check_spectra(const std::vector<double>& r, const std::vector<double>& s) {
  if (r.empty() || r.size() != s.size()) throw std::invalid_argument("r and s must have equal positive length");
  for (double x : r)
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite spectrum");
  for (double x : s)
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite spectrum");
}

inline EmpiricalSample make_sample(Generator g, const std::vector<double>& r, const std::vector<double>& s,
                                   const SamplingOptions& opt) {
  EmpiricalSample out;
  out.generator = g;
  out.seed = opt.seed;
  out.chunk_size = opt.chunk_size;
  out.r = r;
  out.s = s;
  return out;
}

}  // namespace detail

/// l(K1 + K2) with K1, K2 Liouville on H_r, H_s; realized as D_r + U D_s U*.
inline EmpiricalSample sample_hermitian_sum(const std::vector<double>& r, const std::vector<double>& s,
                                            std::size_t count, const SamplingOptions& opt = {}) {
  detail::check_spectra(r, s);
  auto out = detail::make_sample(Generator::hermitian_sum, r, s, opt);
  const auto dr = differences(r), ds = differences(s);
  const std::size_t n = r.size();
  out.rows = detail::run_chunks(count, opt, [&](std::size_t, std::size_t size, Rng& rng) {
    std::vector<std::vector<double>> rows;
    const ComplexMatrix d_r = diagonal_matrix(dr), d_s = diagonal_matrix(ds);
    for (std::size_t j = 0; j < size; ++j) {
      ComplexMatrix u = haar_unitary(n, rng);
      ComplexMatrix k = u * d_s * adjoint(u);
      for (std::size_t i = 0; i < n; ++i) k(i, i) += d_r(i, i);
      rows.push_back(l_map(HermitianMatrix(k)));
    }
    return rows;
  });
  return out;
}

/// l^B(A C) with A, C Liouville on B_r, B_s.
inline EmpiricalSample sample_multiplicative(const std::vector<double>& r, const std::vector<double>& s,
                                             std::size_t count, const SamplingOptions& opt = {}) {
  detail::check_spectra(r, s);
  auto out = detail::make_sample(Generator::multiplicative, r, s, opt);
  out.rows = detail::run_chunks(count, opt, [&](std::size_t, std::size_t size, Rng& rng) {
    BSampler sa(r), sc(s);
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < size; ++j) {
      UpperTriangular a = sa.next(rng);
      UpperTriangular c = sc.next(rng);
      rows.push_back(singular_l(a.matrix() * c.matrix()));
    }
    return rows;
  });
  return out;
}

/// Values are carried exactly as integers in units of 2^-32 on the
/// fixed-point path of the tropical generator.
inline constexpr double fixed_point_scale = 4294967296.0;

inline Tableau<std::int64_t> to_fixed_point(const Tableau<double>& t) {
  Tableau<std::int64_t> out(t.n(), t.role(), 0);
  for (std::size_t k = 0; k <= t.n(); ++k)
    for (std::size_t i = 0; i <= k; ++i) {
      double v = t.at(k, i) * fixed_point_scale;
      if (!(std::abs(v) < 9.0e18 / 64.0)) throw std::overflow_error("value too large for the fixed-point path");
      out.at(k, i) = std::llround(v);
    }
  return out;
}

/// kappa(u, v) with u, v uniform on P_r, P_s. Each uniform tableau is
/// snapped to the 2^-32 grid, after which every step is exact integer
/// arithmetic (the chamber inverse is integral). A snapped draw that leaves
/// the GZ cone is redrawn; this needs a margin below 2^-31.
inline EmpiricalSample sample_tropical_kappa(const std::vector<double>& r, const std::vector<double>& s,
                                             std::size_t count, const SamplingOptions& opt = {},
                                             const ChamberMap* chamber = nullptr) {
  detail::check_spectra(r, s);
  auto out = detail::make_sample(Generator::tropical_kappa, r, s, opt);
  std::optional<ChamberMap> own;
  if (!chamber) chamber = &own.emplace(find_delta0_chamber(r.size()));
  const DoubleGamma0 twice(*chamber->layout);
  out.rows = detail::run_chunks(count, opt, [&](std::size_t, std::size_t size, Rng& rng) {
    PolytopeSampler pu(r), pv(s);
    auto draw = [&](PolytopeSampler& p) {
      for (;;) {
        auto t = to_fixed_point(p.next(rng));
        if (gz_check(t)) return t;
      }
    };
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < size; ++j) {
      auto u = draw(pu);
      auto v = draw(pv);
      std::vector<double> row;
      if (chamber->integral_inverse) {
        for (auto x : kappa_fixed(u, v, *chamber, twice)) row.push_back(static_cast<double>(x) / fixed_point_scale);
      } else {
        auto to_q = [](const Tableau<std::int64_t>& t) {
          Tableau<Rational> q(t.n(), t.role(), Rational(0));
          for (std::size_t k = 0; k <= t.n(); ++k)
            for (std::size_t i = 0; i <= k; ++i)
              q.at(k, i) = Rational(static_cast<long>(t.at(k, i))) / Rational(fixed_point_scale);
          return q;
        };
        for (const auto& x : kappa(to_q(u), to_q(v), *chamber, &twice)) row.push_back(x.get_d());
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });
  return out;
}

/// The top row after snapping to the fixed-point grid, as the sampler sees it.
inline std::vector<Rational> snapped_spectrum(const std::vector<double>& r) {
  std::vector<Rational> out;
  for (double x : r) out.push_back(Rational(static_cast<long>(std::llround(x * fixed_point_scale))) / Rational(fixed_point_scale));
  return out;
}

/// Exact triples (r, s, kappa(u, v)) from the tropical generator; r and s
/// are the snapped spectra, so every triple lies in the cone exactly.
inline std::vector<HornTriple<Rational>> sample_kappa_triples(const std::vector<double>& r, const std::vector<double>& s,
                                                              std::size_t count, const SamplingOptions& opt = {}) {
  auto sample = sample_tropical_kappa(r, s, count, opt);
  const auto rq = snapped_spectrum(r), sq = snapped_spectrum(s);
  std::vector<HornTriple<Rational>> out;
  out.reserve(sample.count());
  for (const auto& row : sample.rows) out.push_back({rq, sq, rationalize(row)});
  return out;
}

inline EmpiricalSample generate(Generator g, const std::vector<double>& r, const std::vector<double>& s,
                                std::size_t count, const SamplingOptions& opt = {}) {
  switch (g) {
    case Generator::hermitian_sum: return sample_hermitian_sum(r, s, count, opt);
    case Generator::multiplicative: return sample_multiplicative(r, s, count, opt);
    case Generator::tropical_kappa: return sample_tropical_kappa(r, s, count, opt);
  }
  throw std::invalid_argument("unknown generator");
}

// ---------------------------------------------------------------- KS

/// A coordinate index or a fixed direction.
struct Projection {
  std::optional<std::size_t> coordinate;
  std::vector<double> direction;

  static Projection coord(std::size_t i) { return {i, {}}; }
  static Projection along(std::vector<double> d) { return {std::nullopt, std::move(d)}; }

  double apply(const std::vector<double>& x) const {
    if (coordinate) return x.at(*coordinate);
    if (direction.size() != x.size()) throw std::invalid_argument("projection dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += direction[i] * x[i];
    return s;
  }

  std::string describe() const {
    if (coordinate) return "coordinate " + std::to_string(*coordinate + 1);
    std::string s = "direction (";
    char buf[32];
    for (std::size_t i = 0; i < direction.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.6f", direction[i]);
      s += (i ? "," : "") + std::string(buf);
    }
    return s + ")";
  }
};

/// Unit vectors drawn once from a fixed seed.
inline std::vector<Projection> random_projections(std::size_t n, std::size_t count, std::uint64_t seed = 20240607) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Projection> out;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> d(n);
    double norm = 0.0;
    for (auto& x : d) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : d) x /= norm;
    out.push_back(Projection::along(std::move(d)));
  }
  return out;
}

enum class KSKind { two_sample, versus_cdf };

struct KSResult {
  double statistic = 0.0;
  std::size_t size_x = 0, size_y = 0;
  KSKind kind = KSKind::two_sample;
  std::string projection;
};

/// Values are compared on a 1e-9 grid so that quantities equal up to
/// floating-point noise (such as the constant trace coordinate) tie.
inline constexpr double ks_resolution = 1e-9;

namespace detail {

inline std::vector<long long> snap(const std::vector<double>& x) {
  std::vector<long long> out;
  out.reserve(x.size());
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("ks: non-finite value");
    out.push_back(std::llround(v / ks_resolution));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline double ks_statistic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("ks: empty sample");
  auto a = detail::snap(x), b = detail::snap(y);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    long long v;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      v = a[i];
    else
      v = b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double ks_statistic(const std::vector<double>& x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks: empty sample");
  auto a = detail::snap(x);
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < a.size()) {
    std::size_t j = i;
    while (j < a.size() && a[j] == a[i]) ++j;
    double f = cdf(static_cast<double>(a[i]) * ks_resolution);
    d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(f - static_cast<double>(i) / n)});
    i = j;
  }
  return d;
}

inline std::vector<double> project(const EmpiricalSample& s, const Projection& p) {
  std::vector<double> out;
  out.reserve(s.count());
  for (const auto& row : s.rows) out.push_back(p.apply(row));
  return out;
}

inline KSResult ks_distance(const EmpiricalSample& x, const EmpiricalSample& y, const Projection& p) {
  return {ks_statistic(project(x, p), project(y, p)), x.count(), y.count(), KSKind::two_sample, p.describe()};
}

inline KSResult ks_distance(const std::function<double(double)>& cdf, const EmpiricalSample& y, const Projection& p) {
  return {ks_statistic(project(y, p), cdf), 0, y.count(), KSKind::versus_cdf, p.describe()};
}

/// CDF of the first coordinate for n = 2 with spectra (r, -r) and (s, -s):
/// density t / (2 r s) on [|r - s|, r + s].
inline std::function<double(double)> n2_sum_cdf(double r, double s) {
  return [r, s](double t) {
    double lo = std::abs(r - s), hi = r + s;
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    return (t * t - (r - s) * (r - s)) / (4.0 * r * s);
  };
}

// ------------------------------------------------------------ sweep

struct SweepResult {
  std::vector<double> taus;
  std::vector<double> errors;                  // e(tau) = max_i |l^B_i / tau - m_i|
  std::vector<std::vector<double>> component;  // per tau, |l^B_i / tau - m_i|
  std::vector<double> tropical;                // m^T_1..m^T_n
  std::optional<double> slope;                 // least squares of log e on e > floor
  double delta = 0.0;
  std::vector<double> phases;
  WbarWeighting weighting;
};

inline constexpr double precision_floor = 1e-13;

/// Least-squares slope of log y against x, or nullopt with < 2 points.
inline std::optional<double> log_slope(const std::vector<double>& x, const std::vector<double>& y,
                                       double floor = precision_floor) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] > floor) pts.push_back({x[i], std::log(y[i])});
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto& [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    sxy += (a - mx) * (b - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

/// e(tau) for the lift M(Gamma_0; tau w, phi). Phases sit on the diagonal
/// edges (one angle per diagonal); every other edge has phase 1. Minors of
/// the lift are summed over disjoint path systems directly on the network,
/// so no cancellation enters beyond that caused by the phases themselves.
inline SweepResult limit_sweep(const Gamma0Layout& layout, const WbarWeighting& w, const std::vector<double>& phases,
                               const std::vector<double>& tau_grid, const Rational& delta) {
  const std::size_t n = layout.n();
  if (phases.size() != n * (n - 1) / 2) throw std::invalid_argument("limit_sweep: one phase per diagonal");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] >= 1.0)) throw std::invalid_argument("limit_sweep: tau must be >= 1");
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) throw std::invalid_argument("limit_sweep: tau grid must increase");
  }
  auto rep = genericity_check(layout, w, delta);
  if (!rep.generic) throw std::domain_error("limit_sweep: weighting is not generic at the declared delta");

  SweepResult res;
  res.delta = delta.get_d();
  res.phases = phases;
  res.weighting = w;
  res.taus = tau_grid;
  const auto full = embed(layout, w);
  for (const auto& m : m_all<TropicalQSemiring>(layout.network, to_tropical(full))) res.tropical.push_back(m.value().get_d());
  std::vector<double> u(full.size());
  for (std::size_t e = 0; e < full.size(); ++e) u[e] = full[e].get_d();
  std::vector<Complex> phi(full.size(), Complex(1.0));
  for (std::size_t d = 0; d < phases.size(); ++d) phi[layout.parameter_edges[d]] = std::polar(1.0, phases[d]);

  for (double tau : tau_grid) {
    Weighting<Complex> lifted(full.size());
    for (std::size_t e = 0; e < full.size(); ++e) lifted[e] = std::exp(tau * u[e]) * phi[e];
    auto minors = all_minors<ComplexRing>(layout.network, lifted);
    std::vector<ComplexMatrix> compounds;
    for (std::size_t k = 1; k <= n; ++k) {
      auto sets = detail::subsets(n, k);
      ComplexMatrix c(sets.size(), sets.size(), Complex(0.0));
      for (std::size_t a = 0; a < sets.size(); ++a)
        for (std::size_t b = 0; b < sets.size(); ++b) {
          HeightSet hi, hj;
          for (auto x : sets[a]) hi.push_back(x + 1);
          for (auto x : sets[b]) hj.push_back(x + 1);
          auto it = minors.find({height_mask(hi), height_mask(hj)});
          if (it != minors.end()) c(a, b) = it->second;
        }
      compounds.push_back(std::move(c));
    }
    auto l = singular_l_from_compounds(compounds);
    std::vector<double> comp(n);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      comp[i] = std::abs(l[i] / tau - res.tropical[i]);
      e = std::max(e, comp[i]);
    }
    res.component.push_back(std::move(comp));
    res.errors.push_back(e);
  }
  res.slope = log_slope(res.taus, res.errors);
  return res;
}

/// e(tau) nonincreasing on tau >= tau_min while above the precision floor.
inline bool sweep_monotone(const SweepResult& r, double tau_min = 5.0, double floor = precision_floor) {
  std::optional<double> prev;
  for (std::size_t i = 0; i < r.taus.size(); ++i) {
    if (r.taus[i] < tau_min) continue;
    double e = r.errors[i];
    if (prev && *prev > floor && e > floor && e > *prev) return false;
    prev = e;
  }
  return true;
}

/// Random W-bar weighting with entries on a 1/4 grid in [-range, range]
/// whose genericity gap and margin both exceed delta.
inline WbarWeighting random_generic_weighting(const Gamma0Layout& layout, Rng& rng, const Rational& delta,
                                              long range = 3) {
  std::uniform_int_distribution<long> q(-4 * range, 4 * range);
  for (std::size_t attempt = 0; attempt < 100000; ++attempt) {
    std::vector<Rational> p(layout.num_parameters());
    for (auto& x : p) x = make_rational(q(rng), 4);
    auto w = WbarWeighting::from_parameters(layout.n(), p);
    if (genericity_check(layout, w, delta).generic) return w;
  }
  throw std::runtime_error("random_generic_weighting: no generic weighting found");
}

// ------------------------------------------------------- forward tests

enum class HornMode { hermitian, multiplicative, tropical };

inline std::string to_string(HornMode m) {
  switch (m) {
    case HornMode::hermitian: return "hermitian";
    case HornMode::multiplicative: return "multiplicative";
    case HornMode::tropical: return "tropical";
  }
  return "unknown";
}

inline HornMode horn_mode_from_string(const std::string& s) {
  if (s == "hermitian") return HornMode::hermitian;
  if (s == "multiplicative") return HornMode::multiplicative;
  if (s == "tropical") return HornMode::tropical;
  throw std::invalid_argument("unknown mode: " + s);
}

struct ForwardReport {
  HornMode mode = HornMode::tropical;
  std::size_t n = 0, count = 0;
  Rational eps;
  std::uint64_t seed = 0;
  std::vector<HornTriple<Rational>> triples;
  std::vector<std::size_t> failures;  // indices into triples
  double pass_rate() const {
    return count == 0 ? 1.0 : 1.0 - static_cast<double>(failures.size()) / static_cast<double>(count);
  }
};

/// Random strictly decreasing spectrum on a 1/64 grid in [-4, 4], as a
/// cumulative vector.
inline std::vector<double> random_cumulative_spectrum(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> q(-256, 256);
  for (;;) {
    std::vector<double> lam(n);
    for (auto& x : lam) x = q(rng) / 64.0;
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    if (strictly_decreasing(lam)) return cumulative(lam);
  }
}

/// Draws `count` triples with the mode's generator and decides each with
/// kt_member at slack eps. Trial t uses the stream derive_seed(seed, t).
inline ForwardReport horn_forward_test(HornMode mode, std::size_t n, std::size_t count, const Rational& eps,
                                       std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("horn_forward_test: n must be positive");
  ForwardReport rep;
  rep.mode = mode;
  rep.n = n;
  rep.count = count;
  rep.eps = eps;
  rep.seed = seed;
  std::optional<Gamma0Layout> layout;
  std::optional<DoubleGamma0> twice;
  if (mode == HornMode::tropical) {
    layout.emplace(n);
    twice.emplace(*layout);
  }
  for (std::size_t t = 0; t < count; ++t) {
    Rng rng(derive_seed(seed, t));
    HornTriple<Rational> triple;
    switch (mode) {
      case HornMode::tropical: {
        std::uniform_int_distribution<long> q(-40, 40);
        auto draw = [&] {
          std::vector<Rational> p(layout->num_parameters());
          for (auto& x : p) x = make_rational(q(rng), 4);
          return WbarWeighting::from_parameters(n, p);
        };
        auto w1 = draw();
        auto w2 = draw();
        triple = horn_triple_tropical(*layout, w1, w2, &*twice);
        break;
      }
      case HornMode::hermitian: {
        auto r = random_cumulative_spectrum(n, rng);
        auto s = random_cumulative_spectrum(n, rng);
        auto k1 = sample_H_r(r, rng);
        auto k2 = sample_H_r(s, rng);
        ComplexMatrix sum = k1.matrix();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) sum(i, j) += k2(i, j);
        triple = rationalize(HornTriple<double>{r, s, l_map(HermitianMatrix(sum))});
        break;
      }
      case HornMode::multiplicative: {
        auto r = random_cumulative_spectrum(n, rng);
        auto s = random_cumulative_spectrum(n, rng);
        auto a = sample_B_r(r, rng);
        auto c = sample_B_r(s, rng);
        triple = rationalize(HornTriple<double>{r, s, singular_l(a.matrix() * c.matrix())});
        break;
      }
    }
    if (!kt_member(triple, eps)) rep.failures.push_back(t);
    rep.triples.push_back(std::move(triple));
  }
  return rep;
}

struct ExceptionalMassReport {
  std::size_t count = 0;
  std::size_t outside = 0;
  Rational eps;
  double fraction() const { return count == 0 ? 0.0 : static_cast<double>(outside) / static_cast<double>(count); }
};

/// Fraction of hermitian-sum draws t for which (r, s, t) fails kt_member.
inline ExceptionalMassReport exceptional_mass_estimate(const std::vector<double>& r, const std::vector<double>& s,
                                                       std::size_t count, const Rational& eps,
                                                       const SamplingOptions& opt = {}) {
  auto sample = sample_hermitian_sum(r, s, count, opt);
  ExceptionalMassReport rep;
  rep.count = sample.count();
  rep.eps = eps;
  const auto rq = rationalize(r), sq = rationalize(s);
  for (const auto& t : sample.rows)
    if (!kt_member(HornTriple<Rational>{rq, sq, rationalize(t)}, eps)) ++rep.outside;
  return rep;
}

// ------------------------------------------------------ measure compare

struct CompareEntry {
  Generator x, y;
  KSResult ks;
  double threshold;
  bool pass;
};

struct CompareReport {
  std::vector<double> r, s;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double threshold = 0.02;
  std::vector<CompareEntry> entries;
  bool pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const CompareEntry& e) { return e.pass; });
  }
};

/// Pairwise KS among the three generators along every coordinate and
/// `projections` fixed random directions. `r2, s2` may differ from (r, s)
/// to drive the second and third generators with mismatched spectra.
inline CompareReport measure_compare(const std::vector<double>& r, const std::vector<double>& s, std::size_t count,
                                     const SamplingOptions& opt, double threshold = 0.02,
                                     std::size_t projections = 3,
                                     std::optional<std::pair<std::vector<double>, std::vector<double>>> other = {}) {
  CompareReport rep;
  rep.r = r;
  rep.s = s;
  rep.seed = opt.seed;
  rep.count = count;
  rep.threshold = threshold;
  const auto& r2 = other ? other->first : r;
  const auto& s2 = other ? other->second : s;
  SamplingOptions o1 = opt, o2 = opt, o3 = opt;
  o1.seed = derive_seed(opt.seed, 1);
  o2.seed = derive_seed(opt.seed, 2);
  o3.seed = derive_seed(opt.seed, 3);
  std::vector<EmpiricalSample> samples{sample_hermitian_sum(r, s, count, o1), sample_multiplicative(r2, s2, count, o2),
                                       sample_tropical_kappa(r2, s2, count, o3)};
  std::vector<Projection> projs;
  for (std::size_t i = 0; i < r.size(); ++i) projs.push_back(Projection::coord(i));
  for (auto& p : random_projections(r.size(), projections)) projs.push_back(std::move(p));
  for (std::size_t a = 0; a < samples.size(); ++a)
    for (std::size_t b = a + 1; b < samples.size(); ++b)
      for (const auto& p : projs) {
        auto ks = ks_distance(samples[a], samples[b], p);
        rep.entries.push_back({samples[a].generator, samples[b].generator, ks, threshold, ks.statistic < threshold});
      }
  return rep;
}

// ------------------------------------------------------------- output

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string join_doubles(const std::vector<double>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + format_double(v[i]);
  return s;
}

/// CSV with a '#' metadata preamble and columns t1..tn.
inline void write_sample_csv(std::ostream& os, const EmpiricalSample& s) {
  os << "# generator: " << to_string(s.generator) << "\n";
  os << "# r: " << join_doubles(s.r) << "\n";
  os << "# s: " << join_doubles(s.s) << "\n";
  os << "# seed: " << s.seed << "\n";
  os << "# count: " << s.count() << "\n";
  os << "# chunk_size: " << s.chunk_size << " (chunk c seeded by derive_seed(seed, c))\n";
  for (std::size_t i = 0; i < s.dimension(); ++i) os << (i ? "," : "") << "t" << i + 1;
  os << "\n";
  for (const auto& row : s.rows) os << join_doubles(row) << "\n";
}

inline nlohmann::json to_json(const CompareReport& rep) {
  nlohmann::json ks = nlohmann::json::array();
  for (const auto& e : rep.entries)
    ks.push_back({{"x", to_string(e.x)},
                  {"y", to_string(e.y)},
                  {"projection", e.ks.projection},
                  {"statistic", e.ks.statistic},
                  {"threshold", e.threshold},
                  {"pass", e.pass}});
  return {{"generator", "hermitian-sum,multiplicative,tropical-kappa"},
          {"r", rep.r},
          {"s", rep.s},
          {"seed", rep.seed},
          {"count", rep.count},
          {"ks", ks},
          {"pass", rep.pass()}};
}

/// Histogram rows "left right density" for gnuplot.
inline void write_histogram(std::ostream& os, const std::vector<double>& x, std::size_t bins) {
  if (x.empty() || bins == 0) return;
  auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi == lo) hi = lo + 1.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    counts[std::min(b, bins - 1)]++;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b)
    os << format_double(lo + b * width) << " " << format_double(lo + (b + 1) * width) << " "
       << format_double(static_cast<double>(counts[b]) / (static_cast<double>(x.size()) * width)) << "\n";
}

}  // namespace hornlab
