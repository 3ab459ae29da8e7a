#pragma once

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hornlab/hive.hpp"
#include "hornlab/network.hpp"
#include "hornlab/rational.hpp"
#include "hornlab/tableau.hpp"

namespace hornlab {

/// {"n": n, "rows": [[l00], [l10, l11], ...]}; entries are numbers or
/// "p/q" strings.
inline nlohmann::json to_json(const Tableau<Rational>& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(detail::rational_to_json(v));
    rows.push_back(r);
  }
  return {{"n", t.n()}, {"rows", rows}};
}

inline nlohmann::json to_json(const Tableau<double>& t) {
  return {{"n", t.n()}, {"rows", t.rows()}};
}

inline Tableau<Rational> tableau_from_json(const nlohmann::json& j, TableauRole role) {
  try {
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : j.at("rows")) {
      std::vector<Rational> row;
      for (const auto& v : r) row.push_back(detail::rational_from_json(v));
      rows.push_back(std::move(row));
    }
    auto t = Tableau<Rational>::from_rows(std::move(rows), role);
    if (j.contains("n") && j.at("n").get<std::size_t>() != t.n())
      throw std::invalid_argument("tableau JSON: n does not match the rows");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed tableau JSON: ") + e.what());
  }
}

/// Comma-separated rationals ("1,1/2,-3e-2").
inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& q : parse_rational_list(text)) out.push_back(q.get_d());
  return out;
}

/// Triples CSV: optional header a1..an,b1..bn,c1..cn; '#' lines skipped;
/// further columns after c_n are ignored.
inline std::vector<HornTriple<Rational>> read_triples_csv(std::istream& in, std::size_t n) {
  std::vector<HornTriple<Rational>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line[0] == 'a') continue;
    auto v = parse_rational_list(line);
    if (v.size() < 3 * n) throw std::invalid_argument("triples CSV: row has fewer than 3n values");
    HornTriple<Rational> t;
    t.a.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
    t.b.assign(v.begin() + static_cast<std::ptrdiff_t>(n), v.begin() + static_cast<std::ptrdiff_t>(2 * n));
    t.c.assign(v.begin() + static_cast<std::ptrdiff_t>(2 * n), v.begin() + static_cast<std::ptrdiff_t>(3 * n));
    out.push_back(std::move(t));
  }
  return out;
}

inline std::string triples_csv_header(std::size_t n) {
  std::string s;
  for (char c : {'a', 'b', 'c'})
    for (std::size_t i = 1; i <= n; ++i) s += (s.empty() ? "" : ",") + std::string(1, c) + std::to_string(i);
  return s;
}

inline std::string triple_csv_row(const HornTriple<Rational>& t) {
  std::string s;
  for (const auto* v : {&t.a, &t.b, &t.c})
    for (const auto& x : *v) s += (s.empty() ? "" : ",") + to_decimal_string(x);
  return s;
}

inline nlohmann::json complex_matrix_to_json(const Matrix<std::complex<double>>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hornlab
