#include <gtest/gtest.h>

#include <sstream>

#include "hornlab/hornlab.hpp"
#include "oracles.hpp"

using namespace hornlab;

namespace {

const std::vector<double> r2{2.0, 0.0}, s2{1.0, 0.0};
const std::vector<double> r3{2.0, 3.0, 2.0}, s3{1.5, 2.0, 1.0};

SamplingOptions seeded(std::uint64_t seed, std::size_t threads = 1) {
  SamplingOptions o;
  o.seed = seed;
  o.threads = threads;
  return o;
}

WbarWeighting worked_example() {
  return WbarWeighting::from_parameters(2, {make_rational(3, 2), make_rational(-1, 2), Rational(0)});
}

std::vector<double> tau_grid(int lo, int hi) {
  std::vector<double> t;
  for (int i = lo; i <= hi; ++i) t.push_back(i);
  return t;
}

}  // namespace

TEST(HermitianSum, RankOneIsDeterministic) {
  auto s = sample_hermitian_sum({1.5}, {2.0}, 100, seeded(1));
  for (const auto& row : s.rows) EXPECT_NEAR(row[0], 3.5, 1e-14);
}

TEST(HermitianSum, RankTwoClosedForm) {
  auto s = sample_hermitian_sum(r2, s2, 50000, seeded(2));
  for (const auto& row : s.rows) {
    EXPECT_GE(row[0], 1.0 - 1e-9);
    EXPECT_LE(row[0], 3.0 + 1e-9);
    EXPECT_NEAR(row[1], 0.0, 1e-9);
  }
  EXPECT_LT(ks_distance(n2_sum_cdf(2.0, 1.0), s, Projection::coord(0)).statistic, 0.01);
}

TEST(HermitianSum, DegenerateSpectrumIsAllowed) {
  // Spectrum {1, 1}: the sum is the shifted second summand.
  auto s = sample_hermitian_sum({1.0, 2.0}, s2, 10, seeded(1));
  for (const auto& row : s.rows) EXPECT_NEAR(row[0], 2.0, 1e-12);
  EXPECT_THROW(sample_hermitian_sum(r2, {1.0}, 10, seeded(1)), std::invalid_argument);
}

TEST(PolytopeGenerators, DegenerateSpectrumIsRejected) {
  EXPECT_THROW(sample_multiplicative({1.0, 2.0}, s2, 10, seeded(1)), std::domain_error);
  EXPECT_THROW(sample_tropical_kappa({1.0, 2.0}, s2, 10, seeded(1)), std::domain_error);
}

TEST(Multiplicative, RankOneIsDeterministic) {
  auto s = sample_multiplicative({1.5}, {2.0}, 100, seeded(3));
  for (const auto& row : s.rows) EXPECT_NEAR(row[0], 3.5, 1e-12);
}

TEST(Multiplicative, LastComponentIsConstant) {
  auto s = sample_multiplicative(r3, s3, 500, seeded(4));
  for (const auto& row : s.rows) EXPECT_NEAR(row[2], r3[2] + s3[2], 1e-9);
}

TEST(Multiplicative, RankTwoMatchesHermitianSum) {
  auto m = sample_multiplicative(r2, s2, 50000, seeded(5));
  auto h = sample_hermitian_sum(r2, s2, 50000, seeded(6));
  EXPECT_LT(ks_distance(m, h, Projection::coord(0)).statistic, 0.02);
  EXPECT_LT(ks_distance(n2_sum_cdf(2.0, 1.0), m, Projection::coord(0)).statistic, 0.01);
}

TEST(TropicalKappa, RankTwoClosedForm) {
  auto t = sample_tropical_kappa(r2, s2, 20000, seeded(7));
  for (const auto& row : t.rows) {
    EXPECT_GE(row[0], 1.0);
    EXPECT_LE(row[0], 3.0);
    EXPECT_EQ(row[1], 0.0);
  }
  EXPECT_LT(ks_distance(n2_sum_cdf(2.0, 1.0), t, Projection::coord(0)).statistic, oracle::dkw_epsilon(20000, 1e-3));
}

TEST(TropicalKappa, OutputsAreExactMembers) {
  for (const auto& h : sample_kappa_triples(r3, s3, 200, seeded(8))) EXPECT_TRUE(kt_member(h));
}

TEST(TropicalKappa, PreimageLiesOnTwoSegments) {
  // kappa_1 = max(r + v, s - u) = t: either v = t - r or u = s - t.
  Rng rng(9);
  const double r = 2.0, s = 1.0, t = 2.2;
  auto us = sample_P_r(r2, 4000, rng), vs = sample_P_r(s2, 4000, rng);
  const auto chamber = find_delta0_chamber(2);
  std::size_t near = 0;
  for (std::size_t j = 0; j < us.size(); ++j) {
    auto u = rationalize(us[j]), v = rationalize(vs[j]);
    double k1 = kappa(u, v, chamber)[0].get_d();
    if (std::abs(k1 - t) >= 0.01) continue;
    ++near;
    double du = std::abs(us[j].at(1, 1) - (s - t)), dv = std::abs(vs[j].at(1, 1) - (t - r));
    EXPECT_LT(std::min(du, dv), 0.01);
  }
  EXPECT_GT(near, 0u);
}

TEST(KS, BasicCases) {
  std::vector<double> x{0.1, 0.5, 0.9, 0.3};
  EXPECT_EQ(ks_statistic(x, x), 0.0);
  EXPECT_EQ(ks_statistic(x, std::vector<double>{2.0, 3.0}), 1.0);
  Rng rng(10);
  std::uniform_real_distribution<double> uni(0, 1);
  std::vector<double> u(100000);
  for (auto& v : u) v = uni(rng);
  double d = ks_statistic(u, [](double t) { return std::clamp(t, 0.0, 1.0); });
  EXPECT_LT(d, 0.01);
  EXPECT_LT(d, oracle::dkw_epsilon(100000, 1e-6));
}

TEST(KS, ResolutionGridTiesNoise) {
  std::vector<double> a(100, 1.0), b(100, 1.0 + 1e-12);
  EXPECT_EQ(ks_statistic(a, b), 0.0);
}

TEST(Projections, FixedAndUnitNorm) {
  auto p = random_projections(3, 3);
  auto q = random_projections(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(p[i].direction, q[i].direction);
    double n = 0;
    for (double x : p[i].direction) n += x * x;
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
  EXPECT_EQ(Projection::coord(1).apply({4.0, 5.0}), 5.0);
}

TEST(Sampling, DeterministicAndThreadIndependent) {
  for (auto g : {Generator::hermitian_sum, Generator::multiplicative, Generator::tropical_kappa}) {
    auto a = generate(g, r3, s3, 300, seeded(11, 1));
    auto b = generate(g, r3, s3, 300, seeded(11, 4));
    auto c = generate(g, r3, s3, 300, seeded(12, 1));
    EXPECT_EQ(a.rows, b.rows) << to_string(g);
    EXPECT_NE(a.rows, c.rows) << to_string(g);
  }
}

TEST(Sampling, ScaleEquivariance) {
  const double tau = 3.0;
  std::vector<double> tr, ts;
  for (double x : r3) tr.push_back(tau * x);
  for (double x : s3) ts.push_back(tau * x);
  for (auto g : {Generator::hermitian_sum, Generator::tropical_kappa}) {
    auto base = generate(g, r3, s3, 20000, seeded(13));
    auto scaled = generate(g, tr, ts, 20000, seeded(14));
    for (auto& row : base.rows)
      for (auto& x : row) x *= tau;
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_LT(ks_distance(base, scaled, Projection::coord(i)).statistic, 0.02) << to_string(g) << " " << i;
  }
}

TEST(Sampling, CsvHasPreambleAndHeader) {
  std::ostringstream os;
  write_sample_csv(os, sample_hermitian_sum(r2, s2, 3, seeded(1)));
  std::string text = os.str();
  EXPECT_EQ(text.front(), '#');
  std::istringstream in(text);
  std::string line;
  std::size_t data = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (!header) {
      header = true;
      continue;
    }
    ++data;
  }
  EXPECT_EQ(data, 3u);
}

TEST(LimitSweep, WorkedExample) {
  Gamma0Layout layout(2);
  auto res = limit_sweep(layout, worked_example(), {0.0}, tau_grid(1, 30), make_rational(2, 5));
  EXPECT_EQ(res.tropical, (std::vector<double>{1.0, -0.5}));
  EXPECT_LT(res.errors.back(), 1e-6);
  for (const auto& comp : res.component) EXPECT_LE(comp[1], 1e-12);
  ASSERT_TRUE(res.slope.has_value());
  EXPECT_LT(*res.slope, 0.0);
  EXPECT_LE(*res.slope, -0.75 * 0.4);
  EXPECT_TRUE(sweep_monotone(res));
}

TEST(LimitSweep, RankThreeGenericWeighting) {
  Gamma0Layout layout(3);
  Rng rng(15);
  const Rational delta = make_rational(1, 4);
  auto w = random_generic_weighting(layout, rng, delta);
  std::uniform_real_distribution<double> ang(0, 6.283185307179586);
  std::vector<double> phases(3);
  for (auto& p : phases) p = ang(rng);
  auto res = limit_sweep(layout, w, phases, tau_grid(1, 30), delta);
  ASSERT_TRUE(res.slope.has_value());
  EXPECT_LE(*res.slope, -0.75 * 0.25);
  EXPECT_TRUE(sweep_monotone(res));
}

TEST(LimitSweep, SinglePointGridHasNoSlope) {
  Gamma0Layout layout(2);
  auto res = limit_sweep(layout, worked_example(), {0.0}, {5.0}, make_rational(2, 5));
  EXPECT_FALSE(res.slope.has_value());
}

TEST(LimitSweep, Preconditions) {
  Gamma0Layout layout(2);
  auto z = WbarWeighting::from_parameters(2, {Rational(0), Rational(0), Rational(0)});
  EXPECT_THROW(limit_sweep(layout, z, {0.0}, {1.0, 2.0}, make_rational(1, 10)), std::domain_error);
  EXPECT_THROW(limit_sweep(layout, worked_example(), {}, {1.0}, make_rational(1, 10)), std::invalid_argument);
  EXPECT_THROW(limit_sweep(layout, worked_example(), {0.0}, {2.0, 1.0}, make_rational(1, 10)), std::invalid_argument);
}

TEST(LogSlope, ExactExponential) {
  std::vector<double> x{1, 2, 3, 4}, y;
  for (double t : x) y.push_back(std::exp(-0.7 * t));
  EXPECT_NEAR(*log_slope(x, y), -0.7, 1e-12);
  EXPECT_FALSE(log_slope({1.0}, {0.5}).has_value());
  EXPECT_FALSE(log_slope({1.0, 2.0}, {1e-20, 1e-20}).has_value());
}

TEST(ForwardTest, AllModesPass) {
  EXPECT_EQ(horn_forward_test(HornMode::tropical, 3, 200, Rational(0), 1).pass_rate(), 1.0);
  EXPECT_EQ(horn_forward_test(HornMode::hermitian, 3, 100, make_rational(1, 100000000), 1).pass_rate(), 1.0);
  EXPECT_EQ(horn_forward_test(HornMode::multiplicative, 3, 100, make_rational(1, 100000000), 1).pass_rate(), 1.0);
}

TEST(ForwardTest, ModeNames) {
  for (auto m : {HornMode::tropical, HornMode::hermitian, HornMode::multiplicative})
    EXPECT_EQ(horn_mode_from_string(to_string(m)), m);
  EXPECT_THROW(horn_mode_from_string("bogus"), std::invalid_argument);
}

TEST(ExceptionalMass, ZeroAtRankTwo) {
  auto rep = exceptional_mass_estimate(r2, s2, 10000, make_rational(1, 100000000), seeded(16));
  EXPECT_EQ(rep.count, 10000u);
  EXPECT_EQ(rep.outside, 0u);
}

TEST(ExceptionalMass, OverStrictSlackFindsMass) {
  auto rep = exceptional_mass_estimate(r2, s2, 2000, make_rational(-1, 10), seeded(17));
  EXPECT_GT(rep.fraction(), 0.0);
}

TEST(Compare, RankTwoPasses) {
  auto rep = measure_compare(r2, s2, 50000, seeded(18));
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.entries.size(), 3u * (2 + 3));
  EXPECT_TRUE(to_json(rep)["pass"].get<bool>());
}

TEST(Compare, MismatchedSpectraFail) {
  auto rep = measure_compare(r2, s2, 5000, seeded(19), 0.02, 3, std::make_pair(std::vector<double>{3.0, 0.0}, s2));
  EXPECT_FALSE(rep.pass());
}
