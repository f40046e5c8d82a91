#pragma once

// Network parameters, validation and derived scalars.
//
// Everything is stored in SI units (m, m^-2, W, Hz). Configuration files use
// per-km^2 densities and dBm powers; the conversion happens once, in
// params_from_json().

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hccn {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s
inline constexpr double kPerKm2 = 1.0e-6;       // 1/km^2 expressed in 1/m^2

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

struct NetworkParams {
  double lambda_bs = 40 * kPerKm2;   // BS density, 1/m^2
  double lambda_ap = 200 * kPerKm2;  // AP density, 1/m^2
  double lambda_ue = 120 * kPerKm2;  // UE density, 1/m^2
  double alpha_bs = 2.8;             // BS path-loss exponent
  double alpha_ap = 1.5;             // AP path-loss exponent
  double power_bs = dbm_to_watts(50);  // W
  double power_ap = dbm_to_watts(10);  // W
  double snr_ref_db = 130;           // P_B / noise power, dB
  int antennas_bs = 8;
  int antennas_ap = 2;
  double radius = 500;               // m
  double freq = 3.5e9;               // Hz

  bool operator==(const NetworkParams&) const = default;
};

/// The reference operating point.
inline NetworkParams reference_params() { return NetworkParams{}; }

struct DerivedParams {
  double area = 0;             // m^2
  double eta_bs = 0;           // lambda_bs / lambda_ue
  double eta_ap = 0;           // 1 / (lambda_ue * area)
  double mean_ues_per_bs = 0;  // lambda_ue / lambda_bs, real-valued
  double rho_bs = 0;           // W
  double rho_ap = 0;           // W
  double noise_power = 0;      // W
  double beta0 = 0;            // BS reference path gain
  double delta0 = 0;           // AP reference path gain
};

inline DerivedParams derive(const NetworkParams& p) {
  DerivedParams d;
  d.area = std::numbers::pi * p.radius * p.radius;
  d.eta_bs = p.lambda_bs / p.lambda_ue;
  d.eta_ap = 1.0 / (p.lambda_ue * d.area);
  d.mean_ues_per_bs = p.lambda_ue / p.lambda_bs;
  d.rho_bs = p.power_bs * d.eta_bs;
  d.rho_ap = p.power_ap * d.eta_ap;
  d.noise_power = p.power_bs / db_to_linear(p.snr_ref_db);
  const double g = kSpeedOfLight / (4.0 * std::numbers::pi * p.freq);
  d.beta0 = g * g;
  d.delta0 = g * g;
  return d;
}

/// Returns one message per violated invariant; empty when the parameters are
/// usable by every engine.
inline std::vector<std::string> validate(const NetworkParams& p) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be > 0");
  };
  positive(p.lambda_bs, "lambda_B");
  positive(p.lambda_ap, "lambda_A");
  positive(p.lambda_ue, "lambda_U");
  positive(p.power_bs, "P_B");
  positive(p.power_ap, "P_A");
  positive(p.radius, "radius");
  positive(p.freq, "freq");
  if (!std::isfinite(p.snr_ref_db)) out.push_back("snr_ref_dB must be finite");
  if (p.antennas_bs < 1) out.push_back("N_B must be >= 1");
  if (p.antennas_ap < 1) out.push_back("N_A must be >= 1");
  if (!(p.alpha_bs > 2)) out.push_back("alpha1 must be > 2");
  if (!(p.alpha_ap < 2)) out.push_back("alpha2 must be < 2");
  if (!(p.alpha_ap > 0)) out.push_back("alpha2 must be > 0");
  if (!(p.lambda_ue > p.lambda_bs)) out.push_back("lambda_U must exceed lambda_B");
  return out;
}

/// Non-fatal observations about a parameter set.
inline std::vector<std::string> warnings(const NetworkParams& p) {
  std::vector<std::string> out;
  if (!(p.power_bs > p.power_ap)) out.push_back("P_B is expected to exceed P_A");
  return out;
}

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace config_keys {
inline constexpr const char* kAll[] = {"lambda_B_per_km2", "lambda_A_per_km2", "lambda_U_per_km2",
                                       "alpha1",           "alpha2",           "P_B_dBm",
                                       "P_A_dBm",          "snr_ref_dB",       "N_B",
                                       "N_A",              "freq_GHz",         "radius_m"};
}

/// Reads or writes one config key in its file units.
inline double get_config_value(const NetworkParams& p, const std::string& key) {
  if (key == "lambda_B_per_km2") return p.lambda_bs / kPerKm2;
  if (key == "lambda_A_per_km2") return p.lambda_ap / kPerKm2;
  if (key == "lambda_U_per_km2") return p.lambda_ue / kPerKm2;
  if (key == "alpha1") return p.alpha_bs;
  if (key == "alpha2") return p.alpha_ap;
  if (key == "P_B_dBm") return watts_to_dbm(p.power_bs);
  if (key == "P_A_dBm") return watts_to_dbm(p.power_ap);
  if (key == "snr_ref_dB") return p.snr_ref_db;
  if (key == "N_B") return p.antennas_bs;
  if (key == "N_A") return p.antennas_ap;
  if (key == "freq_GHz") return p.freq / 1e9;
  if (key == "radius_m") return p.radius;
  throw ConfigError("unknown config key '" + key + "'");
}

inline void set_config_value(NetworkParams& p, const std::string& key, double v) {
  auto as_count = [&](double x) {
    if (x != std::floor(x)) throw ConfigError(key + " must be an integer");
    return static_cast<int>(x);
  };
  if (key == "lambda_B_per_km2") p.lambda_bs = v * kPerKm2;
  else if (key == "lambda_A_per_km2") p.lambda_ap = v * kPerKm2;
  else if (key == "lambda_U_per_km2") p.lambda_ue = v * kPerKm2;
  else if (key == "alpha1") p.alpha_bs = v;
  else if (key == "alpha2") p.alpha_ap = v;
  else if (key == "P_B_dBm") p.power_bs = dbm_to_watts(v);
  else if (key == "P_A_dBm") p.power_ap = dbm_to_watts(v);
  else if (key == "snr_ref_dB") p.snr_ref_db = v;
  else if (key == "N_B") p.antennas_bs = as_count(v);
  else if (key == "N_A") p.antennas_ap = as_count(v);
  else if (key == "freq_GHz") p.freq = v * 1e9;
  else if (key == "radius_m") p.radius = v;
  else throw ConfigError("unknown config key '" + key + "'");
}

/// Missing keys keep their reference defaults; unknown keys are rejected.
inline NetworkParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  NetworkParams p = reference_params();
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    set_config_value(p, key, value.get<double>());
  }
  return p;
}

inline nlohmann::ordered_json params_to_json(const NetworkParams& p) {
  nlohmann::ordered_json j;
  for (const char* key : config_keys::kAll) {
    const double v = get_config_value(p, key);
    if (std::string(key) == "N_B" || std::string(key) == "N_A")
      j[key] = static_cast<int>(v);
    else
      j[key] = v;
  }
  return j;
}

inline NetworkParams load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse config '" + path + "': " + e.what());
  }
  return params_from_json(j);
}

}  // namespace hccn
