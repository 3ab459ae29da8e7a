#include <gtest/gtest.h>

#include <random>

#include "hornlab/hornlab.hpp"
#include "oracles.hpp"

using namespace hornlab;

namespace {

Rational q(long p, long d = 1) { return make_rational(p, d); }

HornTriple<Rational> triple(std::vector<Rational> a, std::vector<Rational> b, std::vector<Rational> c) {
  return {std::move(a), std::move(b), std::move(c)};
}

Tableau<Rational> hive_rows(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) {
    r.emplace_back();
    for (long x : row) r.back().push_back(Rational(x));
  }
  return Tableau<Rational>::from_rows(r, TableauRole::hive);
}

std::vector<double> column(const std::vector<Tableau<double>>& ts, std::size_t k, std::size_t i) {
  std::vector<double> out;
  for (const auto& t : ts) out.push_back(t.at(k, i));
  return out;
}

}  // namespace

TEST(HiveCheck, ZeroTableauIsAHive) {
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_TRUE(hive_check(Tableau<Rational>(n, TableauRole::hive, q(0))));
}

TEST(HiveCheck, ThirdFamilyViolation) {
  // l^1_0 + l^1_1 < l^2_1 + l^0_0 while families 1 and 2 hold with equality.
  auto t = hive_rows({{1}, {0, 0}, {0, 0, 0}});
  EXPECT_FALSE(hive_check(t));
  for (const auto& r : rhombus_inequalities(2)) {
    if (r.family == 3) {
      EXPECT_LT(rhombus_margin(t, r), 0);
    } else {
      EXPECT_GE(rhombus_margin(t, r), 0);
    }
  }
  EXPECT_TRUE(hive_check(t, q(1)));
}

TEST(HiveCheck, GZTableauSatisfiesInterlacingFamilies) {
  auto t = gz_tableau_from_rows<Rational>({{q(1)}, {q(3), q(2)}});
  for (const auto& r : rhombus_inequalities(2, false)) EXPECT_GE(rhombus_margin(t, r), 0);
  EXPECT_EQ(rhombus_inequalities(3, false).size(), 6u);
  EXPECT_EQ(rhombus_inequalities(3).size(), 9u);
}

TEST(Boundary, ZeroTableau) {
  auto h = boundary(Tableau<Rational>(3, TableauRole::hive, q(0)));
  EXPECT_EQ(h, triple({q(0), q(0), q(0)}, {q(0), q(0), q(0)}, {q(0), q(0), q(0)}));
}

TEST(Boundary, ReadOff) {
  auto h = boundary(hive_rows({{2}, {1, 4}, {0, 2, 3}}));
  EXPECT_EQ(h, triple({q(2), q(3)}, {q(1), q(-1)}, {q(1), q(2)}));
}

TEST(KTMember, RankOneIsTraceAdditivity) {
  EXPECT_TRUE(kt_member(triple({q(1)}, {q(2)}, {q(3)})));
  EXPECT_FALSE(kt_member(triple({q(1)}, {q(2)}, {q(4)})));
}

TEST(KTMember, RankTwoExamples) {
  EXPECT_TRUE(kt_member(triple({q(1), q(1)}, {q(1), q(1)}, {q(3, 2), q(2)})));
  EXPECT_FALSE(kt_member(triple({q(1), q(1)}, {q(1), q(1)}, {q(5, 2), q(2)})));
}

TEST(KTMember, RankTwoIntervalMatchesBruteForce) {
  // Spectra {1, 0} and {1, 0}: the top eigenvalue of the sum ranges over [1, 2].
  Rng rng(4);
  double lo = 10, hi = -10;
  for (int trial = 0; trial < 2000; ++trial) {
    auto k1 = sample_H_r({1.0, 1.0}, rng), k2 = sample_H_r({1.0, 1.0}, rng);
    ComplexMatrix sum = k1.matrix();
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) sum(i, j) += k2(i, j);
    double top = eigenvalues(HermitianMatrix(sum))[0];
    lo = std::min(lo, top);
    hi = std::max(hi, top);
  }
  EXPECT_GE(lo, 1.0 - 1e-9);
  EXPECT_LE(hi, 2.0 + 1e-9);
  EXPECT_LT(lo, 1.1);
  EXPECT_GT(hi, 1.9);
  for (long k = -4; k <= 12; ++k) {
    Rational c1 = q(k, 4);
    bool inside = c1 >= 1 && c1 <= 2;
    EXPECT_EQ(kt_member(triple({q(1), q(1)}, {q(1), q(1)}, {c1, q(2)})), inside) << c1;
  }
}

TEST(KTMember, HyperplaneMismatchIsRejected) {
  EXPECT_FALSE(kt_member(triple({q(1), q(1)}, {q(1), q(1)}, {q(3, 2), q(2) + q(1, 1000)})));
  EXPECT_TRUE(kt_member(triple({q(1), q(1)}, {q(1), q(1)}, {q(3, 2), q(2) + q(1, 1000)}), q(1, 100)));
}

TEST(KTMember, NegativeSlackTightens) {
  // c_1 = 1 sits on the boundary of [1, 2].
  auto h = triple({q(1), q(1)}, {q(1), q(1)}, {q(1), q(2)});
  EXPECT_TRUE(kt_member(h));
  EXPECT_FALSE(kt_member(h, q(-1, 10)));
}

TEST(KTMember, WitnessIsAHiveWithTheRightBoundary) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = random_cumulative_spectrum(3, rng), s = random_cumulative_spectrum(3, rng);
    auto k1 = sample_H_r(r, rng), k2 = sample_H_r(s, rng);
    ComplexMatrix sum = k1.matrix();
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) sum(i, j) += k2(i, j);
    auto h = rationalize(HornTriple<double>{r, s, l_map(HermitianMatrix(sum))});
    auto t = kt_solve(h, default_numeric_slack());
    ASSERT_TRUE(t.has_value());
    EXPECT_TRUE(hive_check(*t, default_numeric_slack()));
    auto b = boundary(*t);
    EXPECT_EQ(b.a, h.a);
    EXPECT_EQ(b.c, h.c);
  }
}

TEST(KTMember, BoundaryOfAnyHiveIsAMember) {
  Rng rng(21);
  std::uniform_int_distribution<long> v(-16, 16);
  for (std::size_t n = 2; n <= 4; ++n) {
    Gamma0Layout layout(n);
    DoubleGamma0 twice(layout);
    for (int trial = 0; trial < 10; ++trial) {
      auto draw = [&] {
        std::vector<Rational> p(layout.num_parameters());
        for (auto& x : p) x = q(v(rng), 4);
        return WbarWeighting::from_parameters(n, p);
      };
      auto h1 = horn_triple_tropical(layout, draw(), draw(), &twice);
      auto h2 = horn_triple_tropical(layout, draw(), draw(), &twice);
      auto t1 = kt_solve(h1), t2 = kt_solve(h2);
      ASSERT_TRUE(t1 && t2);
      Tableau<Rational> sum(n, TableauRole::hive, q(0));
      for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t i = 0; i <= k; ++i) sum.at(k, i) = t1->at(k, i) + q(3) * t2->at(k, i);
      ASSERT_TRUE(hive_check(sum));
      EXPECT_TRUE(kt_member(boundary(sum)));
    }
  }
}

TEST(KTMember, DoubleOverloadUsesNumericSlack) {
  HornTriple<double> h{{1.0, 1.0}, {1.0, 1.0}, {1.0 - 1e-10, 2.0}};
  EXPECT_TRUE(kt_member(h));
  EXPECT_FALSE(kt_member(rationalize(h)));
}

TEST(KTMember, ShapeErrors) {
  EXPECT_THROW(kt_member(triple({q(1)}, {q(1), q(1)}, {q(1)})), std::invalid_argument);
  EXPECT_THROW(kt_member(triple({}, {}, {})), std::invalid_argument);
}

TEST(GZCheck, RankTwoInequalities) {
  // l^2_1 >= l^1_1 and l^2_1 + l^1_1 >= l^2_2.
  EXPECT_TRUE(gz_check(gz_tableau_from_rows<Rational>({{q(1)}, {q(3), q(2)}})));
  EXPECT_FALSE(gz_check(gz_tableau_from_rows<Rational>({{q(4)}, {q(3), q(2)}})));
  EXPECT_FALSE(gz_check(gz_tableau_from_rows<Rational>({{q(-2)}, {q(3), q(2)}})));
  EXPECT_TRUE(gz_check(gz_tableau_from_rows<Rational>({{q(3)}, {q(3), q(2)}})));
  EXPECT_TRUE(gz_check(gz_tableau_from_rows<Rational>({{q(-1)}, {q(3), q(2)}})));
}

TEST(GZCheck, ZeroTableauAndDelta) {
  Tableau<Rational> z(3, TableauRole::gz, q(0));
  EXPECT_TRUE(gz_check(z));
  EXPECT_FALSE(gz_check(z, q(1, 10)));
  EXPECT_THROW(gz_check(z, q(-1)), std::invalid_argument);
}

TEST(GZCheck, NonzeroLeftEdgeFails) {
  auto t = gz_tableau_from_rows<Rational>({{q(1)}, {q(3), q(2)}});
  t.at(1, 0) = q(1);
  EXPECT_FALSE(gz_check(t));
}

TEST(GZCheck, MinMargin) {
  auto t = gz_tableau_from_rows<Rational>({{q(1)}, {q(3), q(2)}});
  EXPECT_EQ(*gz_min_margin(t), q(2));
  EXPECT_TRUE(gz_check(t, q(3, 2)));
  EXPECT_FALSE(gz_check(t, q(2)));
  EXPECT_FALSE(gz_min_margin(Tableau<Rational>(1, TableauRole::gz, q(0))).has_value());
}

TEST(Simplex, SmallSystems) {
  FeasibilityProblem p;
  p.num_variables = 2;
  p.constraints.push_back({{{0, q(1)}}, q(-1), false});             // x >= 1
  p.constraints.push_back({{{0, q(-1)}, {1, q(-1)}}, q(3), false});  // x + y <= 3
  p.constraints.push_back({{{1, q(1)}}, q(-2), false});             // y >= 2
  auto x = solve_feasibility(p);
  ASSERT_TRUE(x);
  EXPECT_GE((*x)[0], 1);
  EXPECT_GE((*x)[1], 2);
  EXPECT_LE((*x)[0] + (*x)[1], 3);
  p.constraints.push_back({{{0, q(1)}}, q(-3, 2), false});  // x >= 3/2
  EXPECT_FALSE(solve_feasibility(p));
}

TEST(Simplex, PinsAndEqualities) {
  FeasibilityProblem p;
  p.num_variables = 3;
  p.pinned[0] = q(-5, 2);
  p.constraints.push_back({{{0, q(1)}, {1, q(1)}}, q(0), true});  // y = -x
  p.constraints.push_back({{{2, q(1)}, {1, q(-1)}}, q(0), false});  // z >= y
  auto x = solve_feasibility(p);
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], q(-5, 2));
  EXPECT_EQ((*x)[1], q(5, 2));
  EXPECT_GE((*x)[2], q(5, 2));
}

TEST(ScaleTriple, Examples) {
  HornTriple<Rational> h = triple({q(1), q(0)}, {q(2), q(1)}, {q(3), q(1)});
  EXPECT_EQ(scale_triple(h, q(1)), h);
  EXPECT_EQ(scale_triple(h, q(2)).a, (std::vector<Rational>{q(2), q(0)}));
  EXPECT_THROW(scale_triple(h, q(0)), std::invalid_argument);
}

TEST(ScaleTriple, MembershipIsScaleInvariant) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = horn_forward_test(HornMode::tropical, 3, 1, q(0), 100 + trial).triples[0];
    EXPECT_TRUE(kt_member(scale_triple(h, q(7, 3))));
    auto bad = h;
    bad.c[0] += q(1000);
    EXPECT_FALSE(kt_member(scale_triple(bad, q(7, 3))));
  }
}

TEST(SamplePr, RankTwoIsUniformOnTheInterval) {
  Rng rng(31);
  auto ts = sample_P_r({2.0, 0.0}, 10000, rng);
  auto x = column(ts, 1, 1);
  double mean = 0;
  for (double v : x) {
    EXPECT_GE(v, -2.0);
    EXPECT_LE(v, 2.0);
    mean += v;
  }
  mean /= static_cast<double>(x.size());
  // Uniform on [-2, 2]: mean 0, standard deviation 4 / sqrt(12).
  EXPECT_NEAR(mean, 0.0, 3.0 * (4.0 / std::sqrt(12.0)) / std::sqrt(10000.0));
  double ks = ks_statistic(x, [](double t) { return std::clamp((t + 2.0) / 4.0, 0.0, 1.0); });
  EXPECT_LT(ks, oracle::dkw_epsilon(10000, 1e-3));
}

TEST(SamplePr, SamplesLieInThePolytope) {
  Rng rng(32);
  std::vector<double> r{3.0, 4.0, 3.5, 1.0};
  for (const auto& t : sample_P_r(r, 500, rng)) {
    EXPECT_TRUE(gz_check(t, 0.0, 1e-12));
    for (std::size_t i = 1; i <= 4; ++i) EXPECT_DOUBLE_EQ(t.at(4, i), r[i - 1]);
  }
}

TEST(SamplePr, MatchesRejectionOracle) {
  Rng rng(33), orng(34);
  std::vector<double> r{2.0, 3.0, 2.0};
  const std::size_t m = 20000;
  auto chain = sample_P_r(r, m, rng);
  auto ref = oracle::rejection_sample_P_r(r, m, orng);
  const double bound = oracle::dkw_two_sample(m, 1e-3);
  for (auto [k, i] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 1}, {2, 2}})
    EXPECT_LT(ks_statistic(column(chain, k, i), column(ref, k, i)), bound) << k << "," << i;
}

TEST(SamplePr, DegenerateSpectrumIsRejected) {
  Rng rng(1);
  EXPECT_THROW(sample_P_r({1.0, 2.0}, 10, rng), std::domain_error);
  EXPECT_THROW(sample_P_r({}, 10, rng), std::invalid_argument);
}

TEST(SamplePr, SeedDeterminism) {
  Rng a(77), b(77);
  EXPECT_EQ(sample_P_r({2.0, 3.0, 2.0}, 50, a), sample_P_r({2.0, 3.0, 2.0}, 50, b));
}
