#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "hornlab/hornlab.hpp"
#include "oracles.hpp"

using namespace hornlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) o.detail = what;
  o.pass = o.pass && cond;
}

std::vector<Rational> random_weights(std::size_t m, Rng& rng) {
  std::uniform_int_distribution<long> num(-6, 6), den(1, 5);
  std::vector<Rational> w(m);
  for (auto& x : w) x = make_rational(num(rng), den(rng));
  return w;
}

std::vector<double> tau_grid() {
  std::vector<double> t;
  for (int i = 1; i <= 30; ++i) t.push_back(i);
  return t;
}

std::vector<double> spaced_spectrum(std::size_t n, double top) {
  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i)
    lam[i] = top * (static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(i)) / (static_cast<double>(n) - 1.0);
  return cumulative(lam);
}

std::vector<double> random_spectrum(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (;;) {
    std::vector<double> lam(n);
    for (auto& x : lam) x = uni(rng);
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    if (n == 1 || strictly_decreasing(lam)) return cumulative(lam);
  }
}

double max_abs_diff(const Tableau<double>& a, const Tableau<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k <= a.n(); ++k)
    for (std::size_t i = 0; i <= k; ++i) d = std::max(d, std::abs(a.at(k, i) - b.at(k, i)));
  return d;
}

SamplingOptions seeded(std::uint64_t seed) {
  SamplingOptions o;
  o.seed = seed;
  return o;
}

// AC1: network minors by path enumeration equal determinant minors, and the
// matrix of a concatenation is the product of matrices.
Outcome ac1() {
  Outcome o;
  Rng rng(101);
  std::size_t minors = 0;
  for (std::size_t n = 2; n <= 4; ++n) {
    auto g = build_gamma0(n);
    auto g2 = build_layered(n, {{1, 2}, {2, 1}, {n, n - 1}});
    auto gg = concatenate(g, g2);
    for (int trial = 0; trial < 200; ++trial) {
      auto w = random_weights(g.num_edges(), rng);
      auto m = correspondence_matrix<RationalField>(g, w);
      for (std::size_t k = 1; k <= n; ++k)
        for (const auto& I : oracle::subsets(n, k))
          for (const auto& J : oracle::subsets(n, k)) {
            std::vector<std::size_t> rows, cols;
            for (auto h : I) rows.push_back(matrix_index(n, h));
            for (auto h : J) cols.push_back(matrix_index(n, h));
            Rational det = oracle::leibniz_determinant(submatrix(m, rows, cols));
            require(o, minor_by_enumeration<RationalField>(g, w, I, J) == det, "path minor != determinant");
            require(o, matrix_minor(m, I, J) == det, "matrix minor != Leibniz");
            ++minors;
          }
      auto w2 = random_weights(g2.num_edges(), rng);
      auto lhs = correspondence_matrix<RationalField>(gg, compose(w, w2));
      auto rhs = multiply<RationalField>(m, correspondence_matrix<RationalField>(g2, w2));
      require(o, lhs == rhs, "concatenation identity");
    }
  }
  if (o.pass) o.detail = std::to_string(minors) + " minors and 600 concatenations exact";
  return o;
}

// AC2: tropical GZ tableaux interlace and tropical singular values decrease.
Outcome ac2() {
  Outcome o;
  Rng rng(102);
  std::size_t violations = 0;
  for (std::size_t n = 2; n <= 4; ++n) {
    auto g = build_gamma0(n);
    for (int trial = 0; trial < 1000; ++trial) {
      auto w = random_weights(g.num_edges(), rng);
      if (!gz_check(finite_tableau(tropical_gz<Rational>(g, w)))) ++violations;
      auto lambda = tropical_singular_values<Rational>(g, w);
      for (std::size_t i = 1; i < n; ++i)
        if (lambda[i - 1] < lambda[i]) ++violations;
    }
  }
  require(o, violations == 0, std::to_string(violations) + " violations");
  o.detail = o.pass ? "3000 weightings, 0 violations" : o.detail;
  return o;
}

// AC3: the chamber exists for n <= 5 and lt_inverse round-trips.
Outcome ac3() {
  Outcome o;
  Rng rng(103);
  for (std::size_t n = 1; n <= 5; ++n) {
    auto chamber = find_delta0_chamber(n);
    require(o, chamber.integral_inverse, "non-integral inverse at n=" + std::to_string(n));
    Gamma0Layout layout(n);
    for (int trial = 0; trial < 1000; ++trial) {
      auto xi = detail::random_interior_gz(n, rng);
      auto w = lt_inverse(xi, chamber);
      require(o, lt_forward(layout, w) == xi, "round trip failed at n=" + std::to_string(n));
    }
  }
  if (o.pass) o.detail = "chamber found for n=1..5, 5000 exact round trips";
  return o;
}

// AC4: generated triples lie in the Knutson-Tao cone.
Outcome ac4() {
  Outcome o;
  const Rational eps = make_rational(1, 100000000);
  std::ostringstream d;
  for (std::size_t n = 2; n <= 4; ++n) {
    auto t = horn_forward_test(HornMode::tropical, n, 1000, Rational(0), 400 + n);
    auto h = horn_forward_test(HornMode::hermitian, n, 500, eps, 410 + n);
    auto m = horn_forward_test(HornMode::multiplicative, n, 500, eps, 420 + n);
    require(o, t.pass_rate() == 1.0, "tropical pass rate < 1 at n=" + std::to_string(n));
    require(o, h.pass_rate() == 1.0, "hermitian pass rate < 1 at n=" + std::to_string(n));
    require(o, m.pass_rate() == 1.0, "multiplicative pass rate < 1 at n=" + std::to_string(n));
    d << "n=" << n << ":" << t.pass_rate() << "/" << h.pass_rate() << "/" << m.pass_rate() << " ";
  }
  if (o.pass) o.detail = d.str();
  return o;
}

// AC5: the tropical approximation error decays at rate delta.
Outcome ac5() {
  Outcome o;
  std::ostringstream d;
  auto check = [&](const Gamma0Layout& layout, const WbarWeighting& w, const std::vector<double>& phases,
                   const Rational& delta, const std::string& label) {
    auto res = limit_sweep(layout, w, phases, tau_grid(), delta);
    const double dd = to_double(delta);
    require(o, sweep_monotone(res), label + " not monotone");
    require(o, res.slope.has_value() && *res.slope <= -0.75 * dd, label + " slope above -0.75 delta");
    d << label << " slope " << (res.slope ? *res.slope : 0.0) << " ";
  };
  Gamma0Layout l2(2);
  check(l2,
        WbarWeighting::from_parameters(2, {make_rational(3, 2), make_rational(-1, 2), Rational(0)}), {0.0},
        make_rational(2, 5), "n=2");
  Gamma0Layout l3(3);
  const Rational delta = make_rational(1, 4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(500 + seed);
    auto w = random_generic_weighting(l3, rng, delta);
    std::uniform_real_distribution<double> ang(0, 6.283185307179586);
    std::vector<double> phases(3);
    for (auto& p : phases) p = ang(rng);
    check(l3, w, phases, delta, "n=3#" + std::to_string(seed));
  }
  if (o.pass) o.detail = d.str();
  return o;
}

// AC6: the three generators match the rank-two closed-form CDF.
Outcome ac6() {
  Outcome o;
  const std::vector<double> r{2.0, 0.0}, s{1.0, 0.0};
  auto cdf = n2_sum_cdf(2.0, 1.0);
  std::ostringstream d;
  for (auto g : {Generator::hermitian_sum, Generator::multiplicative, Generator::tropical_kappa}) {
    auto sample = generate(g, r, s, 50000, seeded(600 + static_cast<int>(g)));
    double ks = ks_distance(cdf, sample, Projection::coord(0)).statistic;
    require(o, ks < 0.01, to_string(g) + " KS " + std::to_string(ks));
    d << to_string(g) << " " << ks << " ";
  }
  if (o.pass) o.detail = d.str();
  return o;
}

// AC7: three-way agreement at n = 3.
Outcome ac7() {
  Outcome o;
  auto rep = measure_compare(spaced_spectrum(3, 2.0), spaced_spectrum(3, 1.0), 50000, seeded(700));
  double worst = 0.0;
  for (const auto& e : rep.entries) worst = std::max(worst, e.ks.statistic);
  require(o, rep.pass(), "max KS " + std::to_string(worst));
  if (o.pass) o.detail = std::to_string(rep.entries.size()) + " comparisons, max KS " + std::to_string(worst);
  return o;
}

// AC8: sampled sums never leave the cone.
Outcome ac8() {
  Outcome o;
  const Rational eps = make_rational(1, 100000000);
  for (std::size_t n = 2; n <= 3; ++n) {
    auto rep = exceptional_mass_estimate(spaced_spectrum(n, 2.0), spaced_spectrum(n, 1.0), 10000, eps, seeded(800 + n));
    require(o, rep.outside == 0, std::to_string(rep.outside) + " outside at n=" + std::to_string(n));
  }
  if (o.pass) o.detail = "0 of 10000 outside for n=2,3";
  return o;
}

// AC9: reconstruction round trips.
Outcome ac9() {
  Outcome o;
  Rng rng(900);
  double worst_h = 0.0, worst_b = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 1000; ++trial) {
      auto r = random_spectrum(n, rng);
      Tableau<double> xi = n == 1 ? gz_tableau_from_rows<double>({{r[0]}}) : sample_P_r(r, 1, rng).front();
      worst_h = std::max(worst_h, max_abs_diff(gz_H(reconstruct_H(xi, uniform_angles(n, rng))), xi));
      auto l = singular_l(sample_B_r(r, rng).matrix());
      for (std::size_t i = 0; i < n; ++i) worst_b = std::max(worst_b, std::abs(l[i] - r[i]));
    }
  }
  require(o, worst_h <= 1e-9, "gz_H error " + std::to_string(worst_h));
  require(o, worst_b <= 1e-8, "singular_l error " + std::to_string(worst_b));
  if (o.pass) {
    std::ostringstream d;
    d << "max errors " << worst_h << ", " << worst_b;
    o.detail = d.str();
  }
  return o;
}

std::string run_cli(const std::string& args) {
  std::string cmd = std::string(HORNLAB_CLI) + " " + args + " 2>&1";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return "<popen failed>";
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  int status = pclose(p);
  out += "\nexit " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// AC10: every command is byte-reproducible under a fixed seed.
Outcome ac10() {
  Outcome o;
  auto dir = fs::temp_directory_path() / ("hornlab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string tri = (dir / "tri.csv").string();
  {
    std::ofstream out(tri);
    out << "a1,a2,b1,b2,c1,c2\n2,0,1,0,2.5,0\n1,1,1,1,2.5,2\n";
  }
  const std::vector<std::string> commands{
      "kt-member --a 1,2 --b 3,4 --c 4,6 --witness",
      "kt-member --csv " + tri,
      "gz-check --rows \"1;3,2\"",
      "hive-check --rows \"2;1,4;0,2,3\"",
      "gamma0 --n 3 --format json",
      "gamma0 --n 3 --format dot",
      "trop-gz --n 3 --params 1,2,3,-1,0,1",
      "lt-inverse --rows \"1;3,2;4,4,1\"",
      "kappa-sample --n 3 --count 300",
      "sample --mode hermitian --n 3 --count 300",
      "sample --mode multiplicative --n 3 --count 300",
      "sample --mode tropical --n 3 --count 300",
      "--threads 3 sample --mode hermitian --n 3 --count 3000 --chunk-size 250",
      "measure-compare --n 2 --count 3000",
      "limit-sweep --n 2",
      "limit-sweep --n 3",
      "horn-forward --mode tropical --n 3 --count 100",
      "horn-forward --mode hermitian --n 3 --count 50",
      "horn-forward --mode multiplicative --n 3 --count 50",
      "exceptional-mass --n 3 --count 500",
  };
  std::size_t checked = 0;
  for (const auto& c : commands) {
    const std::string out = (dir / "run.out").string(), rec = (dir / "run.json").string();
    const bool takes_out = c.find("kt-member") == std::string::npos && c.find("gz-check") == std::string::npos &&
                           c.find("hive-check") == std::string::npos;
    const std::string args = "--seed 1234 --record " + rec + " " + c + (takes_out ? " --out " + out : "");
    std::string first = run_cli(args);
    std::string first_file = takes_out ? slurp(out) : "", first_rec = slurp(rec);
    fs::remove(rec);
    if (takes_out) fs::remove(out);
    std::string second = run_cli(args);
    require(o, first == second, "stdout differs: " + c);
    require(o, first.find("\nexit 2") == std::string::npos && first.find("\nexit 3") == std::string::npos,
            "command failed: " + c);
    if (takes_out) require(o, !first_file.empty() && first_file == slurp(out), "output file differs: " + c);
    require(o, !first_rec.empty() && first_rec == slurp(rec), "recorded config differs: " + c);
    ++checked;
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(checked) + " invocations reproduced";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", 30, ac1},  {"AC2", 30, ac2},  {"AC3", 60, ac3},  {"AC4", 180, ac4}, {"AC5", 10, ac5},
      {"AC6", 30, ac6},  {"AC7", 180, ac7}, {"AC8", 120, ac8}, {"AC9", 60, ac9},  {"AC10", 600, ac10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      if (o.pass) o.detail = "over time budget";
      o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %s %s (%.1f s of %.0f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
