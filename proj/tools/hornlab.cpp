#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hornlab/hornlab.hpp"

namespace {

using namespace hornlab;
using nlohmann::json;

enum ExitCode : int { ok = 0, check_failed = 1, usage = 2, precondition = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Precondition failure with a JSON explanation for stderr.
struct PreconditionError : std::domain_error {
  json detail;
  PreconditionError(const std::string& what, json d) : std::domain_error(what), detail(std::move(d)) {}
};

// ------------------------------------------------------------ helpers

std::vector<std::vector<Rational>> parse_rows(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_rational_list(row));
  if (rows.empty()) throw UsageError("--rows is empty");
  return rows;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// Writes to `path`, or to stdout when it is empty or "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  body(out);
  if (!out) throw UsageError("write failed: " + path);
}

std::string rational_text(const Rational& q) { return to_decimal_string(q); }

/// Cumulative spectra used when only n is given: eigenvalues spaced evenly
/// in [-2, 2] for r and in [-1, 1] for s.
std::vector<double> default_spectrum(std::size_t n, double top) {
  if (n == 1) return {top};
  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i)
    lam[i] = top * (static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(i)) / (static_cast<double>(n) - 1.0);
  return cumulative(lam);
}

void resolve_spectra(ExperimentConfig& c) {
  if (c.r.empty() != c.s.empty()) throw UsageError("give both --r and --s, or neither");
  if (c.r.empty()) {
    if (c.n == 0) throw UsageError("give --n or the spectra --r and --s");
    c.r = default_spectrum(c.n, 2.0);
    c.s = default_spectrum(c.n, 1.0);
  }
  if (c.n == 0) c.n = c.r.size();
  c.validate();
}

Rational slack_or(const ExperimentConfig& c, const Rational& fallback) {
  auto s = c.slack_value();
  return s ? *s : fallback;
}

SamplingOptions sampling_options(const ExperimentConfig& c) {
  SamplingOptions o;
  o.seed = c.seed;
  o.threads = c.threads;
  o.chunk_size = c.chunk_size;
  return o;
}

std::size_t require_n(const ExperimentConfig& c) {
  if (c.n == 0) throw UsageError("--n is required");
  if (c.n > 6) throw UsageError("--n must be at most 6");
  return c.n;
}

// ----------------------------------------------------- option plumbing

/// Subcommand-local flags, bound to CLI11 options. Only flags that were
/// actually given override the config file.
struct Flags {
  std::string a, b, c, csv, rows, tableau, params, weights, format = "json", phases, r2, s2;
  std::string r, s, tau, slack, delta, mode, out, report;
  std::size_t n = 0, count = 0, projections = 3, chunk_size = 1000;
  double threshold = 0.02;
  bool witness = false;
  std::map<std::string, CLI::Option*> opt;  // keyed by "subcommand --flag"
  std::string active;

  bool given(const std::string& name) const {
    auto it = opt.find(active + " " + name);
    return it != opt.end() && it->second->count() > 0;
  }
};

struct Globals {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string slack, config, record;
  CLI::Option *seed_opt = nullptr, *threads_opt = nullptr, *slack_opt = nullptr;
};

/// defaults < config file < HORNLAB_SEED (seed only, when absent from the
/// config) < flags.
ExperimentConfig resolve(const std::string& command, const Globals& g, const Flags& f, ExperimentConfig defaults) {
  ExperimentConfig c = std::move(defaults);
  bool seed_from_config = false;
  if (!g.config.empty()) {
    json j = read_json_file(g.config);
    seed_from_config = j.is_object() && j.contains("seed");
    c = config_from_json(j, c);
  }
  c.command = command;
  if (!seed_from_config) {
    if (const char* env = std::getenv("HORNLAB_SEED")) {
      try {
        std::size_t used = 0;
        c.seed = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw UsageError(std::string("HORNLAB_SEED is not an unsigned integer: ") + env);
      }
    }
  }
  if (g.seed_opt->count()) c.seed = g.seed;
  if (g.threads_opt->count()) c.threads = g.threads;
  if (g.slack_opt->count()) c.slack = g.slack;
  if (f.given("--n")) c.n = f.n;
  if (f.given("--r")) c.r = parse_double_list(f.r);
  if (f.given("--s")) c.s = parse_double_list(f.s);
  if (f.given("--count")) c.count = f.count;
  if (f.given("--chunk-size")) c.chunk_size = f.chunk_size;
  if (f.given("--delta")) c.delta = f.delta;
  if (f.given("--tau")) c.tau_grid = parse_double_list(f.tau);
  if (f.given("--mode")) c.mode = f.mode;
  if (f.given("--out")) c.out = f.out;
  c.validate();
  if (!g.record.empty()) emit(g.record, [&](std::ostream& os) { os << to_json(c).dump(2) << "\n"; });
  return c;
}

template <class T>
CLI::Option* add(Flags& f, CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return f.opt[app->get_name() + " " + name] = app->add_option(name, target, help);
}

// ------------------------------------------------------------ commands

int cmd_kt_member(const Globals& g, const Flags& f) {
  auto c = resolve("kt-member", g, f, {});
  const Rational eps = slack_or(c, Rational(0));
  std::vector<HornTriple<Rational>> triples;
  if (f.given("--csv")) {
    if (f.given("--a") || f.given("--b") || f.given("--c")) throw UsageError("--csv excludes --a/--b/--c");
    std::ifstream in(f.csv);
    if (!in) throw UsageError("cannot open " + f.csv);
    std::size_t n = c.n;
    if (n == 0) {
      // Infer n from the header's a-columns, else from the first data row.
      std::string line;
      std::streampos start = in.tellg();
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == 'a') {
          std::stringstream ss(line);
          for (std::string col; std::getline(ss, col, ',');)
            if (!col.empty() && col[0] == 'a') ++n;
        } else {
          auto v = parse_rational_list(line);
          if (v.size() % 3 != 0) throw UsageError("cannot infer n from the CSV; give --n");
          n = v.size() / 3;
        }
        break;
      }
      if (n == 0) throw UsageError("CSV has no data rows; give --n");
      in.clear();
      in.seekg(start);
    }
    triples = read_triples_csv(in, n);
  } else {
    if (!(f.given("--a") && f.given("--b") && f.given("--c"))) throw UsageError("give --a, --b and --c, or --csv");
    HornTriple<Rational> t{parse_rational_list(f.a), parse_rational_list(f.b), parse_rational_list(f.c)};
    t.validate();
    triples.push_back(std::move(t));
  }
  bool all = true;
  for (const auto& t : triples) {
    auto hive = kt_solve(t, eps);
    std::cout << (hive ? "FEASIBLE" : "INFEASIBLE") << "\n";
    if (hive && f.witness) std::cout << to_json(*hive).dump() << "\n";
    all = all && hive.has_value();
  }
  return all ? ok : check_failed;
}

Tableau<Rational> tableau_input(const Flags& f, TableauRole role, bool rows_include_zero) {
  if (f.given("--rows") == f.given("--tableau")) throw UsageError("give exactly one of --rows and --tableau");
  if (f.given("--tableau")) return tableau_from_json(read_json_file(f.tableau), role);
  auto rows = parse_rows(f.rows);
  if (rows_include_zero) return Tableau<Rational>::from_rows(std::move(rows), role);
  return gz_tableau_from_rows(rows, role);
}

int cmd_gz_check(const Globals& g, const Flags& f) {
  auto c = resolve("gz-check", g, f, {});
  auto t = tableau_input(f, TableauRole::gz, false);
  const Rational delta = c.delta ? *c.delta_value() : Rational(0);
  const Rational slack = slack_or(c, Rational(0));
  bool pass = gz_check(t, delta, slack);
  auto margin = gz_min_margin(t);
  std::cout << (pass ? "PASS" : "FAIL") << " min_margin=" << (margin ? rational_text(*margin) : "none") << "\n";
  return pass ? ok : check_failed;
}

int cmd_hive_check(const Globals& g, const Flags& f) {
  auto c = resolve("hive-check", g, f, {});
  auto t = tableau_input(f, TableauRole::hive, true);
  bool pass = hive_check(t, slack_or(c, Rational(0)));
  auto h = boundary(t);
  std::cout << (pass ? "HIVE" : "NOT-HIVE") << "\n" << triples_csv_header(t.n()) << "\n" << triple_csv_row(h) << "\n";
  return pass ? ok : check_failed;
}

int cmd_gamma0(const Globals& g, const Flags& f) {
  auto c = resolve("gamma0", g, f, {});
  auto net = build_gamma0(require_n(c));
  if (f.format != "json" && f.format != "dot") throw UsageError("--format must be json or dot");
  emit(c.out, [&](std::ostream& os) {
    if (f.format == "json")
      os << to_json(net).dump(2) << "\n";
    else
      os << to_dot(net);
  });
  return ok;
}

WbarWeighting weighting_input(const Flags& f, std::size_t n) {
  if (f.given("--params") == f.given("--weights")) throw UsageError("give exactly one of --params and --weights");
  if (f.given("--weights")) {
    auto w = wbar_from_json(read_json_file(f.weights));
    if (n != 0 && w.n != n) throw UsageError("--weights has the wrong rank");
    return w;
  }
  if (n == 0) throw UsageError("--params needs --n");
  auto p = parse_rational_list(f.params);
  if (p.size() != n * (n + 1) / 2) throw UsageError("--params needs n(n+1)/2 values");
  return WbarWeighting::from_parameters(n, p);
}

int cmd_trop_gz(const Globals& g, const Flags& f) {
  auto c = resolve("trop-gz", g, f, {});
  auto w = weighting_input(f, c.n);
  Gamma0Layout layout(w.n);
  emit(c.out, [&](std::ostream& os) { os << to_json(lt_forward(layout, w)).dump() << "\n"; });
  return ok;
}

int cmd_lt_inverse(const Globals& g, const Flags& f) {
  auto c = resolve("lt-inverse", g, f, {});
  auto xi = tableau_input(f, TableauRole::gz, false);
  auto chamber = find_delta0_chamber(xi.n());
  auto w = lt_inverse(xi, chamber);
  emit(c.out, [&](std::ostream& os) { os << to_json(w).dump() << "\n"; });
  return ok;
}

int cmd_kappa_sample(const Globals& g, const Flags& f) {
  ExperimentConfig d;
  d.count = 1000;
  auto c = resolve("kappa-sample", g, f, d);
  resolve_spectra(c);
  auto triples = sample_kappa_triples(c.r, c.s, c.count, sampling_options(c));
  emit(c.out, [&](std::ostream& os) {
    os << "# generator: tropical-kappa\n# seed: " << c.seed << "\n# count: " << triples.size()
       << "\n# chunk_size: " << c.chunk_size << "\n";
    os << triples_csv_header(c.n) << "\n";
    for (const auto& t : triples) os << triple_csv_row(t) << "\n";
  });
  return ok;
}

int cmd_sample(const Globals& g, const Flags& f) {
  ExperimentConfig d;
  d.count = 1000;
  d.mode = "hermitian";
  auto c = resolve("sample", g, f, d);
  resolve_spectra(c);
  Generator gen;
  try {
    gen = generator_from_string(c.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto sample = generate(gen, c.r, c.s, c.count, sampling_options(c));
  emit(c.out, [&](std::ostream& os) { write_sample_csv(os, sample); });
  return ok;
}

int cmd_measure_compare(const Globals& g, const Flags& f) {
  ExperimentConfig d;
  d.count = 50000;
  auto c = resolve("measure-compare", g, f, d);
  resolve_spectra(c);
  std::optional<std::pair<std::vector<double>, std::vector<double>>> other;
  if (f.given("--r2") || f.given("--s2")) {
    auto r2 = f.given("--r2") ? parse_double_list(f.r2) : c.r;
    auto s2 = f.given("--s2") ? parse_double_list(f.s2) : c.s;
    if (r2.size() != c.n || s2.size() != c.n) throw UsageError("--r2/--s2 must have n entries");
    other.emplace(std::move(r2), std::move(s2));
  }
  auto rep = measure_compare(c.r, c.s, c.count, sampling_options(c), f.threshold, f.projections, other);
  emit(c.out, [&](std::ostream& os) { os << to_json(rep).dump(2) << "\n"; });
  return rep.pass() ? ok : check_failed;
}

int cmd_limit_sweep(const Globals& g, const Flags& f) {
  ExperimentConfig d;
  for (int t = 1; t <= 30; ++t) d.tau_grid.push_back(t);
  auto c = resolve("limit-sweep", g, f, d);
  WbarWeighting w;
  Rational delta;
  if (f.given("--params") || f.given("--weights")) {
    w = weighting_input(f, c.n);
    if (!c.delta) throw UsageError("a supplied weighting needs --delta");
    delta = *c.delta_value();
  } else if (c.n == 0 || c.n == 2) {
    // x = h2 = 0, y = d + h1 = 1, z = h1 = -1/2.
    w = WbarWeighting::from_parameters(2, {make_rational(3, 2), make_rational(-1, 2), Rational(0)});
    delta = c.delta ? *c.delta_value() : make_rational(2, 5);
  } else {
    Gamma0Layout layout(require_n(c));
    delta = c.delta ? *c.delta_value() : make_rational(1, 4);
    Rng rng(c.seed);
    w = random_generic_weighting(layout, rng, delta);
  }
  Gamma0Layout layout(w.n);
  std::vector<double> phases(w.n * (w.n - 1) / 2, 0.0);
  if (f.given("--phases")) {
    phases = parse_double_list(f.phases);
    if (phases.size() != w.n * (w.n - 1) / 2) throw UsageError("--phases needs one angle per diagonal");
  }
  auto rep = genericity_check(layout, w, delta);
  if (!rep.generic) {
    json j = {{"delta", rational_text(delta)},
              {"min_gap", rep.min_gap ? json(rational_text(*rep.min_gap)) : json(nullptr)},
              {"min_margin", rep.min_margin ? json(rational_text(*rep.min_margin)) : json(nullptr)},
              {"where", rep.where},
              {"generic", false}};
    if (rep.closest_values)
      j["closest_values"] = {rational_text(rep.closest_values->first), rational_text(rep.closest_values->second)};
    throw PreconditionError("weighting is not generic at the declared delta", j);
  }
  auto res = limit_sweep(layout, w, phases, c.tau_grid, delta);
  const bool monotone = sweep_monotone(res);
  const bool decays = !res.slope || *res.slope <= -0.75 * res.delta;
  emit(c.out, [&](std::ostream& os) {
    os << "# n: " << w.n << "\n# delta: " << rational_text(delta) << "\n# weighting: " << to_json(w).dump()
       << "\n# phases: " << join_doubles(phases) << "\n# tropical: " << join_doubles(res.tropical) << "\n";
    os << "tau,e";
    for (std::size_t i = 1; i <= w.n; ++i) os << ",e" << i;
    os << "\n";
    for (std::size_t k = 0; k < res.taus.size(); ++k)
      os << format_double(res.taus[k]) << "," << format_double(res.errors[k]) << "," << join_doubles(res.component[k])
         << "\n";
    os << "# slope: " << (res.slope ? format_double(*res.slope) : "absent") << "\n";
    os << "# monotone: " << (monotone ? "true" : "false") << "\n";
  });
  return monotone && decays ? ok : check_failed;
}

int cmd_horn_forward(const Globals& g, const Flags& f) {
  ExperimentConfig d;
  d.count = 1000;
  d.mode = "tropical";
  d.n = 3;
  auto c = resolve("horn-forward", g, f, d);
  HornMode mode;
  try {
    mode = horn_mode_from_string(c.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Rational eps = slack_or(c, mode == HornMode::tropical ? Rational(0) : default_numeric_slack());
  auto rep = horn_forward_test(mode, require_n(c), c.count, eps, c.seed);
  std::cout << "mode: " << to_string(mode) << "\nn: " << rep.n << "\ncount: " << rep.count
            << "\neps: " << rational_text(eps) << "\nfailures: " << rep.failures.size()
            << "\npass_rate: " << format_double(rep.pass_rate()) << "\n";
  if (!c.out.empty()) {
    emit(c.out, [&](std::ostream& os) {
      os << "# mode: " << to_string(mode) << "\n# seed: " << c.seed << "\n";
      os << triples_csv_header(rep.n) << ",feasible\n";
      std::size_t next_fail = 0;
      for (std::size_t t = 0; t < rep.triples.size(); ++t) {
        bool failed = next_fail < rep.failures.size() && rep.failures[next_fail] == t;
        if (failed) ++next_fail;
        os << triple_csv_row(rep.triples[t]) << "," << (failed ? 0 : 1) << "\n";
      }
    });
  }
  return rep.failures.empty() ? ok : check_failed;
}

int cmd_exceptional_mass(const Globals& g, const Flags& f) {
  ExperimentConfig d;
  d.count = 10000;
  auto c = resolve("exceptional-mass", g, f, d);
  resolve_spectra(c);
  if (c.n > 4) throw UsageError("exceptional-mass supports n <= 4");
  const Rational eps = slack_or(c, default_numeric_slack());
  auto rep = exceptional_mass_estimate(c.r, c.s, c.count, eps, sampling_options(c));
  json j = {{"r", c.r},         {"s", c.s},
            {"seed", c.seed},   {"count", rep.count},
            {"eps", rational_text(eps)}, {"outside", rep.outside},
            {"fraction", rep.fraction()}};
  emit(c.out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  return rep.outside == 0 ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Horn problem laboratory: hives, planar networks, tropical Gelfand-Zeitlin maps and measures",
               "hornlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "RNG seed (fallback: HORNLAB_SEED, then 1)");
  g.slack_opt = app.add_option("--slack", g.slack, "Slack for inequality checks, a rational literal");
  g.threads_opt = app.add_option("--threads", g.threads, "Worker threads for sampling (default 1)");
  app.add_option("--config", g.config, "JSON experiment config; explicit flags take precedence");
  app.add_option("--record", g.record, "Write the resolved experiment config as JSON");

  Flags f;
  std::function<int(const Globals&, const Flags&)> run;
  auto sub = [&](const std::string& name, const std::string& help, int (*fn)(const Globals&, const Flags&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&run, &f, fn, name] {
      run = fn;
      f.active = name;
    });
    return s;
  };
  auto spectra = [&](CLI::App* s) {
    add(f, s, "--n", f.n, "Rank; default spectra are used when --r/--s are absent");
    add(f, s, "--r", f.r, "Cumulative spectrum r, comma separated");
    add(f, s, "--s", f.s, "Cumulative spectrum s, comma separated");
  };

  auto* kt = sub("kt-member", "Decide membership of (a, b, c) in the Knutson-Tao cone", cmd_kt_member);
  add(f, kt, "--a", f.a, "Comma-separated a");
  add(f, kt, "--b", f.b, "Comma-separated b");
  add(f, kt, "--c", f.c, "Comma-separated c");
  add(f, kt, "--csv", f.csv, "CSV of triples a1..an,b1..bn,c1..cn");
  add(f, kt, "--n", f.n, "Rank of the CSV triples (inferred when absent)");
  f.opt["kt-member --witness"] = kt->add_flag("--witness", f.witness, "Print a witnessing hive for feasible triples");

  auto* gz = sub("gz-check", "Check the interlacing inequalities of a tableau", cmd_gz_check);
  add(f, gz, "--rows", f.rows, "Rows 1..n without the leading zero, ';' between rows");
  add(f, gz, "--tableau", f.tableau, "Tableau JSON file");
  add(f, gz, "--delta", f.delta, "Require every margin to exceed delta");

  auto* hv = sub("hive-check", "Check the rhombus inequalities and print the boundary triple", cmd_hive_check);
  add(f, hv, "--rows", f.rows, "Rows 0..n in full, ';' between rows");
  add(f, hv, "--tableau", f.tableau, "Tableau JSON file");

  auto* g0 = sub("gamma0", "Print the triangular network", cmd_gamma0);
  add(f, g0, "--n", f.n, "Rank")->required();
  add(f, g0, "--format", f.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  add(f, g0, "--out", f.out, "Output file (default stdout)");

  auto* tg = sub("trop-gz", "Tropical Gelfand-Zeitlin tableau of a restricted weighting", cmd_trop_gz);
  add(f, tg, "--n", f.n, "Rank");
  add(f, tg, "--params", f.params, "Diagonal weights in edge order, then sink-horizontal weights by height");
  add(f, tg, "--weights", f.weights, "Weighting JSON file");
  add(f, tg, "--out", f.out, "Output file (default stdout)");

  auto* li = sub("lt-inverse", "Restricted weighting in the chamber with a given GZ tableau", cmd_lt_inverse);
  add(f, li, "--rows", f.rows, "Rows 1..n without the leading zero, ';' between rows");
  add(f, li, "--tableau", f.tableau, "Tableau JSON file");
  add(f, li, "--out", f.out, "Output file (default stdout)");

  auto* ks = sub("kappa-sample", "Exact triples (r, s, kappa(u, v)) with u, v uniform on P_r, P_s", cmd_kappa_sample);
  spectra(ks);
  add(f, ks, "--count", f.count, "Number of triples (default 1000)");
  add(f, ks, "--chunk-size", f.chunk_size, "Samples per independently seeded chunk");
  add(f, ks, "--out", f.out, "Output CSV (default stdout)");

  auto* sm = sub("sample", "Sample the spectrum of a sum or product", cmd_sample);
  add(f, sm, "--mode", f.mode, "hermitian, multiplicative or tropical")
      ->check(CLI::IsMember({"hermitian", "hermitian-sum", "multiplicative", "tropical", "tropical-kappa"}));
  spectra(sm);
  add(f, sm, "--count", f.count, "Number of samples (default 1000)");
  add(f, sm, "--chunk-size", f.chunk_size, "Samples per independently seeded chunk");
  add(f, sm, "--out", f.out, "Output CSV (default stdout)");

  auto* mc = sub("measure-compare", "Pairwise KS distances among the three generators", cmd_measure_compare);
  spectra(mc);
  add(f, mc, "--count", f.count, "Samples per generator (default 50000)");
  add(f, mc, "--chunk-size", f.chunk_size, "Samples per independently seeded chunk");
  add(f, mc, "--threshold", f.threshold, "KS threshold (default 0.02)");
  add(f, mc, "--projections", f.projections, "Random projections besides the coordinates (default 3)");
  add(f, mc, "--r2", f.r2, "Spectrum r for the multiplicative and tropical generators");
  add(f, mc, "--s2", f.s2, "Spectrum s for the multiplicative and tropical generators");
  add(f, mc, "--out", f.out, "Output JSON report (default stdout)");

  auto* ls = sub("limit-sweep", "Distance between scaled singular values and the tropical limit", cmd_limit_sweep);
  add(f, ls, "--n", f.n, "Rank; n = 2 uses the worked example, larger n a seeded generic weighting");
  add(f, ls, "--params", f.params, "Weighting parameters, as for trop-gz");
  add(f, ls, "--weights", f.weights, "Weighting JSON file");
  add(f, ls, "--delta", f.delta, "Genericity margin");
  add(f, ls, "--tau", f.tau, "Increasing tau grid, comma separated (default 1..30)");
  add(f, ls, "--phases", f.phases, "One angle per diagonal (default 0)");
  add(f, ls, "--out", f.out, "Output CSV (default stdout)");

  auto* hf = sub("horn-forward", "Check generated triples against the Knutson-Tao cone", cmd_horn_forward);
  add(f, hf, "--mode", f.mode, "tropical, hermitian or multiplicative")
      ->check(CLI::IsMember({"tropical", "hermitian", "multiplicative"}));
  add(f, hf, "--n", f.n, "Rank (default 3)");
  add(f, hf, "--count", f.count, "Number of triples (default 1000)");
  add(f, hf, "--out", f.out, "Write the triples as CSV");

  auto* em = sub("exceptional-mass", "Fraction of sampled sums outside the cone", cmd_exceptional_mass);
  spectra(em);
  add(f, em, "--count", f.count, "Number of samples (default 10000)");
  add(f, em, "--chunk-size", f.chunk_size, "Samples per independently seeded chunk");
  add(f, em, "--out", f.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  try {
    return run(g, f);
  } catch (const PreconditionError& e) {
    std::cerr << "hornlab: " << e.what() << "\n" << e.detail.dump(2) << "\n";
    return precondition;
  } catch (const std::domain_error& e) {
    std::cerr << "hornlab: " << e.what() << "\n";
    return precondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hornlab: " << e.what() << "\n";
    return usage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "hornlab: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "hornlab: " << e.what() << "\n";
    return check_failed;
  }
}
