#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hornlab/rational.hpp"

namespace hornlab {

/// Everything needed to rerun one command. Rationals (slack, delta) are
/// kept as literals so that the JSON form round-trips exactly.
struct ExperimentConfig {
  std::string command;
  std::size_t n = 0;  // 0: inferred from r / s
  std::vector<double> r, s;
  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t chunk_size = 1000;
  std::optional<std::string> slack;
  std::optional<std::string> delta;
  std::vector<double> tau_grid;
  std::string mode;
  std::string out;
  std::string report;

  std::optional<Rational> slack_value() const {
    return slack ? std::optional<Rational>(parse_rational(*slack)) : std::nullopt;
  }
  std::optional<Rational> delta_value() const {
    return delta ? std::optional<Rational>(parse_rational(*delta)) : std::nullopt;
  }

  /// Field-level checks shared by every command.
  void validate() const {
    if (threads == 0) throw std::invalid_argument("threads must be at least 1");
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be at least 1");
    if (!r.empty() && !s.empty() && r.size() != s.size()) throw std::invalid_argument("r and s differ in length");
    if (n != 0 && !r.empty() && r.size() != n) throw std::invalid_argument("r does not have n entries");
    if (n != 0 && !s.empty() && s.size() != n) throw std::invalid_argument("s does not have n entries");
    if (slack) slack_value();
    if (delta && *delta_value() < 0) throw std::invalid_argument("delta must be nonnegative");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
      if (!(tau_grid[i] >= 1.0)) throw std::invalid_argument("tau values must be >= 1");
      if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) throw std::invalid_argument("tau grid must increase");
    }
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = {{"command", c.command}, {"n", c.n},          {"r", c.r},
                      {"s", c.s},             {"count", c.count},  {"seed", c.seed},
                      {"threads", c.threads}, {"chunk_size", c.chunk_size}, {"tau_grid", c.tau_grid},
                      {"mode", c.mode},       {"out", c.out},      {"report", c.report}};
  j["slack"] = c.slack ? nlohmann::json(*c.slack) : nlohmann::json(nullptr);
  j["delta"] = c.delta ? nlohmann::json(*c.delta) : nlohmann::json(nullptr);
  return j;
}

namespace detail {

inline std::optional<std::string> literal_field(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return to_decimal_string(rational_from_double(v.get<double>()));
  throw std::invalid_argument("expected a number or a rational literal");
}

}  // namespace detail

/// Overlays the fields present in `j` onto `base`; unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {}) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") base.command = v.get<std::string>();
      else if (key == "n") base.n = v.get<std::size_t>();
      else if (key == "r") base.r = v.get<std::vector<double>>();
      else if (key == "s") base.s = v.get<std::vector<double>>();
      else if (key == "count") base.count = v.get<std::size_t>();
      else if (key == "seed") base.seed = v.get<std::uint64_t>();
      else if (key == "threads") base.threads = v.get<std::size_t>();
      else if (key == "chunk_size") base.chunk_size = v.get<std::size_t>();
      else if (key == "slack") base.slack = detail::literal_field(v);
      else if (key == "delta") base.delta = detail::literal_field(v);
      else if (key == "tau_grid") base.tau_grid = v.get<std::vector<double>>();
      else if (key == "mode") base.mode = v.get<std::string>();
      else if (key == "out") base.out = v.get<std::string>();
      else if (key == "report") base.report = v.get<std::string>();
      else throw std::invalid_argument("unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  base.validate();
  return base;
}

}  // namespace hornlab
