#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdcnet/error.hpp"

namespace mdcnet {

enum class BoundaryMode { torus, plane };

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Scenario parameters as written in a config file: thresholds in dB, noise in dBm.
// Internal units everywhere else: metres, seconds, milliwatts, linear ratios.
struct ConfigCandidate {
  double sensor_density = 1e-3;  // per m^2
  double mdc_density = 1e-3;     // per m^2
  double ap_density = 1e-4;      // per m^2 (the AP density symbol appears twice in the model; one field)
  double sensor_power_mw = 5.0;
  double mdc_power_mw = 10.0;
  double sleep_power_mw = 0.01;
  double path_loss_exp = 3.0;
  double noise_dbm = -121.0;
  double contact_radius = 10.0;      // m
  double aggregation_radius = 20.0;  // m
  double speed = 5.0;                // m/s
  double walk_time = 10.0;           // s
  double pause_time = 2.0;           // s
  double sensor_threshold_db = 10.0;
  double ap_threshold_db = 0.0;
  int batch_size = 64;        // packets collected before an MDC heads to an AP
  double arrival_rate = 0.6;  // packets/s per sensor
  double slot = 0.1;          // s
  double arena_side = 1000.0; // m
  BoundaryMode boundary = BoundaryMode::torus;

  bool operator==(const ConfigCandidate&) const = default;
};

// Validated configuration. Immutable by convention once produced by validate_config.
struct NetworkConfig {
  double sensor_density = 0;
  double mdc_density = 0;
  double ap_density = 0;
  double sensor_power_mw = 0;
  double mdc_power_mw = 0;
  double sleep_power_mw = 0;
  double path_loss_exp = 0;
  double noise_mw = 0;
  double contact_radius = 0;
  double aggregation_radius = 0;
  double speed = 0;
  double walk_time = 0;
  double pause_time = 0;
  double sensor_threshold = 0;
  double ap_threshold = 0;
  int batch_size = 0;
  double arrival_rate = 0;
  double slot = 0;
  double arena_side = 0;
  BoundaryMode boundary = BoundaryMode::torus;

  bool operator==(const NetworkConfig&) const = default;
};

struct Violation {
  ErrorKind kind;
  std::string field;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<Violation> v)
      : Error(v.empty() ? ErrorKind::InvalidArgument : v.front().kind, summarize(v)),
        violations_(std::move(v)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& v) {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += "; ";
      out += std::string(to_string(x.kind)) + "(" + x.field + "): " + x.message;
    }
    return out;
  }
  std::vector<Violation> violations_;
};

inline std::vector<Violation> check_config(const ConfigCandidate& c) {
  std::vector<Violation> out;
  auto positive = [&](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
      out.push_back({ErrorKind::NonPositiveParameter, name, "must be a finite value > 0"});
  };
  auto nonnegative = [&](double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value))
      out.push_back({ErrorKind::NonPositiveParameter, name, "must be a finite value >= 0"});
  };
  positive(c.sensor_density, "lambda_s_per_m2");
  // Zero MDC density is a legal degenerate world for the simulator; analytic routes reject it.
  nonnegative(c.mdc_density, "lambda_m_per_m2");
  positive(c.ap_density, "lambda_b_per_m2");
  positive(c.sensor_power_mw, "p_s_mw");
  positive(c.mdc_power_mw, "p_m_mw");
  nonnegative(c.sleep_power_mw, "p_sleep_mw");
  positive(c.contact_radius, "r_s_m");
  positive(c.aggregation_radius, "r_a_m");
  positive(c.speed, "v_mps");
  positive(c.walk_time, "walk_s");
  positive(c.pause_time, "pause_s");
  positive(c.arrival_rate, "xi_pps");
  positive(c.slot, "delta_s");
  positive(c.arena_side, "arena_side_m");
  if (!std::isfinite(c.noise_dbm))
    out.push_back({ErrorKind::NonPositiveParameter, "noise_dbm", "must be finite"});
  if (!std::isfinite(c.sensor_threshold_db) || !std::isfinite(c.ap_threshold_db))
    out.push_back({ErrorKind::NonPositiveParameter, "t_db", "thresholds must be finite"});
  if (c.batch_size < 1)
    out.push_back({ErrorKind::NonPositiveParameter, "k_packets", "must be >= 1"});
  if (!(c.path_loss_exp > 2.0))
    out.push_back({ErrorKind::PathLossTooSmall, "alpha", "path-loss exponent must exceed 2"});
  if (c.speed > 0 && c.contact_radius > 0 && !(c.walk_time > 2.0 * c.contact_radius / c.speed)) {
    std::ostringstream m;
    m << "walk duration " << c.walk_time << " s must exceed 2*r_s/v = "
      << 2.0 * c.contact_radius / c.speed << " s";
    out.push_back({ErrorKind::WalkTooShort, "walk_s", m.str()});
  }
  if (c.boundary == BoundaryMode::torus && c.arena_side > 0) {
    if (c.contact_radius > c.arena_side / 4.0 || c.aggregation_radius > c.arena_side / 4.0)
      out.push_back({ErrorKind::ArenaTooSmall, "arena_side_m",
                     "r_s and r_a must not exceed arena_side/4 on a torus"});
  }
  return out;
}

inline NetworkConfig validate_config(const ConfigCandidate& c) {
  auto v = check_config(c);
  if (!v.empty()) throw ConfigError(std::move(v));
  NetworkConfig n;
  n.sensor_density = c.sensor_density;
  n.mdc_density = c.mdc_density;
  n.ap_density = c.ap_density;
  n.sensor_power_mw = c.sensor_power_mw;
  n.mdc_power_mw = c.mdc_power_mw;
  n.sleep_power_mw = c.sleep_power_mw;
  n.path_loss_exp = c.path_loss_exp;
  n.noise_mw = db_to_linear(c.noise_dbm);
  n.contact_radius = c.contact_radius;
  n.aggregation_radius = c.aggregation_radius;
  n.speed = c.speed;
  n.walk_time = c.walk_time;
  n.pause_time = c.pause_time;
  n.sensor_threshold = db_to_linear(c.sensor_threshold_db);
  n.ap_threshold = db_to_linear(c.ap_threshold_db);
  n.batch_size = c.batch_size;
  n.arrival_rate = c.arrival_rate;
  n.slot = c.slot;
  n.arena_side = c.arena_side;
  n.boundary = c.boundary;
  return n;
}

inline ConfigCandidate to_candidate(const NetworkConfig& n) {
  ConfigCandidate c;
  c.sensor_density = n.sensor_density;
  c.mdc_density = n.mdc_density;
  c.ap_density = n.ap_density;
  c.sensor_power_mw = n.sensor_power_mw;
  c.mdc_power_mw = n.mdc_power_mw;
  c.sleep_power_mw = n.sleep_power_mw;
  c.path_loss_exp = n.path_loss_exp;
  c.noise_dbm = linear_to_db(n.noise_mw);
  c.contact_radius = n.contact_radius;
  c.aggregation_radius = n.aggregation_radius;
  c.speed = n.speed;
  c.walk_time = n.walk_time;
  c.pause_time = n.pause_time;
  c.sensor_threshold_db = linear_to_db(n.sensor_threshold);
  c.ap_threshold_db = linear_to_db(n.ap_threshold);
  c.batch_size = n.batch_size;
  c.arrival_rate = n.arrival_rate;
  c.slot = n.slot;
  c.arena_side = n.arena_side;
  c.boundary = n.boundary;
  return c;
}

// Re-checks every invariant and returns the config unchanged.
inline NetworkConfig validate_config(const NetworkConfig& n) {
  auto c = to_candidate(n);
  auto v = check_config(c);
  if (!v.empty()) throw ConfigError(std::move(v));
  return n;
}

inline NetworkConfig baseline_config() { return validate_config(ConfigCandidate{}); }

// ---------------------------------------------------------------------------
// key=value file format

struct ConfigField {
  std::string_view key;
  std::function<double(const ConfigCandidate&)> get;
  std::function<void(ConfigCandidate&, double)> set;
};

inline const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = [] {
    std::vector<ConfigField> f;
    auto add = [&](std::string_view key, double ConfigCandidate::*m) {
      f.push_back({key, [m](const ConfigCandidate& c) { return c.*m; },
                   [m](ConfigCandidate& c, double x) { c.*m = x; }});
    };
    add("lambda_s_per_m2", &ConfigCandidate::sensor_density);
    add("lambda_m_per_m2", &ConfigCandidate::mdc_density);
    add("lambda_b_per_m2", &ConfigCandidate::ap_density);
    add("p_s_mw", &ConfigCandidate::sensor_power_mw);
    add("p_m_mw", &ConfigCandidate::mdc_power_mw);
    add("p_sleep_mw", &ConfigCandidate::sleep_power_mw);
    add("alpha", &ConfigCandidate::path_loss_exp);
    add("noise_dbm", &ConfigCandidate::noise_dbm);
    add("r_s_m", &ConfigCandidate::contact_radius);
    add("r_a_m", &ConfigCandidate::aggregation_radius);
    add("v_mps", &ConfigCandidate::speed);
    add("walk_s", &ConfigCandidate::walk_time);
    add("pause_s", &ConfigCandidate::pause_time);
    add("t_s_db", &ConfigCandidate::sensor_threshold_db);
    add("t_a_db", &ConfigCandidate::ap_threshold_db);
    f.push_back({"k_packets", [](const ConfigCandidate& c) { return double(c.batch_size); },
                 [](ConfigCandidate& c, double x) {
                   if (x != std::floor(x))
                     throw Error(ErrorKind::ParseError, "k_packets must be an integer");
                   c.batch_size = static_cast<int>(x);
                 }});
    add("xi_pps", &ConfigCandidate::arrival_rate);
    add("delta_s", &ConfigCandidate::slot);
    add("arena_side_m", &ConfigCandidate::arena_side);
    return f;
  }();
  return fields;
}

inline bool is_config_key(std::string_view key) {
  if (key == "boundary_mode") return true;
  for (const auto& f : config_fields())
    if (f.key == key) return true;
  return false;
}

inline void set_config_value(ConfigCandidate& c, std::string_view key, double value) {
  for (const auto& f : config_fields()) {
    if (f.key == key) {
      f.set(c, value);
      return;
    }
  }
  throw Error(ErrorKind::UnknownKey, "unknown config key '" + std::string(key) + "'");
}

inline double get_config_value(const ConfigCandidate& c, std::string_view key) {
  for (const auto& f : config_fields())
    if (f.key == key) return f.get(c);
  throw Error(ErrorKind::UnknownKey, "unknown config key '" + std::string(key) + "'");
}

namespace detail {
inline std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}
}  // namespace detail

// Parses key=value lines; '#' starts a comment. Keys absent from the text keep their
// baseline defaults. Unknown keys are rejected.
inline ConfigCandidate parse_config(std::string_view text) {
  ConfigCandidate c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
    auto key = detail::trim(std::string_view(t).substr(0, eq));
    auto val = detail::trim(std::string_view(t).substr(eq + 1));
    if (key == "boundary_mode") {
      if (val == "torus")
        c.boundary = BoundaryMode::torus;
      else if (val == "plane")
        c.boundary = BoundaryMode::plane;
      else
        throw Error(ErrorKind::ParseError, "boundary_mode must be torus or plane, got '" + val + "'");
      continue;
    }
    if (!is_config_key(key))
      throw Error(ErrorKind::UnknownKey,
                  "line " + std::to_string(lineno) + ": unknown config key '" + key + "'");
    double x = 0;
    try {
      std::size_t used = 0;
      x = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad number for '" +
                                             key + "': '" + val + "'");
    }
    set_config_value(c, key, x);
  }
  return c;
}

inline ConfigCandidate load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

inline std::string format_config(const ConfigCandidate& c) {
  std::ostringstream out;
  for (const auto& f : config_fields()) {
    // shortest text that reads back to the same double
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, f.get(c));
    out << f.key << " = " << std::string_view(buf, static_cast<std::size_t>(end - buf)) << "\n";
  }
  out << "boundary_mode = " << (c.boundary == BoundaryMode::torus ? "torus" : "plane") << "\n";
  return out.str();
}

}  // namespace mdcnet
