#pragma once

// Parameter sweeps over the analytic and Monte Carlo engines, and their
// CSV / JSON serialization.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hccn/coverage.hpp"
#include "hccn/mcsim/estimate.hpp"
#include "hccn/parallel.hpp"
#include "hccn/params.hpp"
#include "hccn/rate.hpp"

#ifndef HCCN_BUILD_ID
#define HCCN_BUILD_ID "unknown"
#endif

namespace hccn {

enum class Engines { analytic, mc, both };
enum class Metric { coverage, rate };

inline bool runs_analytic(Engines e) { return e != Engines::mc; }
inline bool runs_mc(Engines e) { return e != Engines::analytic; }

inline const char* to_string(Engines e) {
  return e == Engines::analytic ? "analytic" : e == Engines::mc ? "mc" : "both";
}
inline const char* to_string(Metric m) { return m == Metric::coverage ? "coverage" : "rate"; }

inline constexpr const char* kThresholdKey = "T_dB";

struct SweepSpec {
  NetworkParams base = reference_params();
  std::string param = kThresholdKey;
  std::vector<double> values;
  Engines engines = Engines::both;
  Metric metric = Metric::coverage;
  double threshold_db = 5;  // used when the threshold is not the swept parameter
  std::uint64_t trials = 2500;
  std::uint64_t seed = 1;
  bool bits = false;  // rate in bits/s/Hz instead of nats/s/Hz
  int threads = 0;
};

/// A table cell: missing, numeric or text.
struct Cell {
  enum class Kind { na, number, text };
  Kind kind = Kind::na;
  double number = 0;
  std::string text;

  static Cell na() { return {}; }
  static Cell num(double v) { return {Kind::number, v, {}}; }
  static Cell str(std::string s) { return {Kind::text, 0, std::move(s)}; }
  bool operator==(const Cell&) const = default;
};

struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  bool operator==(const SweepResult&) const = default;
};

inline bool is_sweepable(const std::string& key) {
  if (key == kThresholdKey) return true;
  for (const char* k : config_keys::kAll)
    if (key == k) return true;
  return false;
}

/// "start:step:stop" (inclusive, tolerant to rounding) or "a,b,c".
inline std::vector<double> parse_values(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (...) {
      throw ConfigError("invalid number '" + s + "' in value list");
    }
    if (used != s.size()) throw ConfigError("invalid number '" + s + "' in value list");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  std::vector<double> out;
  if (sep == ':') {
    if (parts.size() != 3) throw ConfigError("range must be start:step:stop");
    const double start = number(parts[0]), step = number(parts[1]), stop = number(parts[2]);
    if (!(step != 0) || (stop - start) / step < 0) throw ConfigError("range step has the wrong sign or is zero");
    const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& p : parts) out.push_back(number(p));
  }
  if (out.empty()) throw ConfigError("empty value list");
  return out;
}

/// Grid point i: the base parameters with the swept key applied, and the
/// linear threshold.
inline std::pair<NetworkParams, double> grid_point(const SweepSpec& s, double value) {
  NetworkParams p = s.base;
  double t_db = s.threshold_db;
  if (s.param == kThresholdKey)
    t_db = value;
  else
    set_config_value(p, s.param, value);
  return {p, db_to_linear(t_db)};
}

inline void check_spec(const SweepSpec& s) {
  if (!is_sweepable(s.param)) throw ConfigError("unknown sweep parameter '" + s.param + "'");
  for (double v : s.values) {
    const auto errs = validate(grid_point(s, v).first);
    if (!errs.empty()) {
      std::ostringstream msg;
      msg << s.param << "=" << v << ": " << errs.front();
      throw ConfigError(msg.str());
    }
  }
  if (runs_mc(s.engines) && s.trials == 0) throw ConfigError("trials must be > 0");
}

inline std::vector<std::string> sweep_columns(const SweepSpec& s) {
  const std::string m = s.metric == Metric::coverage ? "p_c" : "rate";
  return {s.param, m + "_analytic", m + "_mc", m + "_mc_ci", m + "_mc_exact", m + "_mc_exact_ci",
          "k_s0_min", "k_s0_max", "path", "resampled"};
}

/// ISO-8601 UTC time. SOURCE_DATE_EPOCH, when set, replaces the clock so that
/// outputs can be reproduced byte for byte.
inline std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(env));
    } catch (...) {
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& s, std::optional<std::string> timestamp = std::nullopt) {
  check_spec(s);
  SweepResult out;
  out.columns = sweep_columns(s);
  out.metadata = {{"config", params_to_json(s.base).dump()},
                  {"param", s.param},
                  {"metric", to_string(s.metric)},
                  {"engines", to_string(s.engines)},
                  {"T_dB", s.param == kThresholdKey ? std::string("swept") : detail::format_number(s.threshold_db)},
                  {"trials", runs_mc(s.engines) ? std::to_string(s.trials) : std::string("NA")},
                  {"seed", runs_mc(s.engines) ? std::to_string(s.seed) : std::string("NA")},
                  {"rate_unit", s.bits ? "bits/s/Hz" : "nats/s/Hz"},
                  {"build", HCCN_BUILD_ID},
                  {"timestamp", timestamp ? *timestamp : timestamp_now()}};

  const std::size_t n = s.values.size();
  const double unit = s.bits ? 1.0 / std::numbers::ln2 : 1.0;
  struct Row {
    std::optional<double> analytic, k_min, k_max;
    std::string path = "NA";
    std::optional<mcsim::Estimate> mc, mc_exact;
    std::optional<std::uint64_t> resampled;
  };
  std::vector<Row> rows(n);
  mcsim::McOptions mc_opt;
  mc_opt.threads = s.threads;

  // A threshold sweep reuses one set of SINR samples for every threshold.
  std::optional<mcsim::SinrBatch> shared;
  if (runs_mc(s.engines) && s.param == kThresholdKey) shared = mcsim::simulate(s.base, s.trials, s.seed, mc_opt);

  parallel_for(
      n,
      [&](std::size_t i) {
        const auto [p, threshold] = grid_point(s, s.values[i]);
        Row& r = rows[i];
        if (runs_analytic(s.engines)) {
          const AnalyticModel model = analytic_model(p);
          if (s.metric == Metric::coverage) {
            CoverageOptions copt;
            copt.threads = s.threads;
            const CoverageReport rep = coverage_report(CoverageContext(model, threshold, copt));
            r.analytic = rep.value;
            r.path = rep.path();
            if (rep.k_min <= rep.k_max) r.k_min = rep.k_min, r.k_max = rep.k_max;
          } else {
            RateOptions ropt;
            ropt.threads = s.threads;
            const RateReport rep = rate_report(RateContext(model, ropt));
            r.analytic = rep.value * unit;
            r.path = "s-integral";
            if (rep.k_min <= rep.k_max) r.k_min = rep.k_min, r.k_max = rep.k_max;
          }
        }
        if (runs_mc(s.engines)) {
          const mcsim::SinrBatch local = shared ? mcsim::SinrBatch{} : mcsim::simulate(p, s.trials, s.seed, mc_opt);
          const mcsim::SinrBatch& b = shared ? *shared : local;
          if (s.metric == Metric::coverage) {
            const auto e = mcsim::coverage_from(b, threshold);
            r.mc = e.approx, r.mc_exact = e.exact, r.resampled = e.resampled;
          } else {
            auto e = mcsim::rate_from(b);
            for (auto* est : {&e.approx, &e.exact}) est->mean *= unit, est->ci_half_width *= unit;
            r.mc = e.approx, r.mc_exact = e.exact, r.resampled = e.resampled;
          }
        }
      },
      s.threads);

  auto opt_cell = [](const std::optional<double>& v) { return v ? Cell::num(*v) : Cell::na(); };
  for (std::size_t i = 0; i < n; ++i) {
    const Row& r = rows[i];
    out.rows.push_back({Cell::num(s.values[i]), opt_cell(r.analytic),
                        r.mc ? Cell::num(r.mc->mean) : Cell::na(), r.mc ? Cell::num(r.mc->ci_half_width) : Cell::na(),
                        r.mc_exact ? Cell::num(r.mc_exact->mean) : Cell::na(),
                        r.mc_exact ? Cell::num(r.mc_exact->ci_half_width) : Cell::na(), opt_cell(r.k_min),
                        opt_cell(r.k_max), Cell::str(r.path),
                        r.resampled ? Cell::num(static_cast<double>(*r.resampled)) : Cell::na()});
  }
  return out;
}

// ---- presets ---------------------------------------------------------------

struct Preset {
  const char* name;
  const char* param;
  const char* values;
  Metric metric;
  double threshold_db;
};

/// Named sweep axes; the curve parameter is left at its base
/// value and can be changed with --set.
inline constexpr Preset kPresets[] = {
    {"fig4", kThresholdKey, "-10:2:20", Metric::coverage, 5},
    {"fig5", kThresholdKey, "-10:2:20", Metric::coverage, 5},
    {"fig6", "lambda_A_per_km2", "100:100:600", Metric::coverage, 5},
    {"fig7", "lambda_A_per_km2", "100:100:600", Metric::rate, 5},
    {"fig8", "P_A_dBm", "-20:5:20", Metric::rate, 5},
    {"fig9", "lambda_U_per_km2", "60:30:240", Metric::rate, 5},
};

inline const Preset* find_preset(const std::string& name) {
  for (const Preset& p : kPresets)
    if (name == p.name) return &p;
  return nullptr;
}

// ---- serialization ---------------------------------------------------------

inline std::string format_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::na:
      return "NA";
    case Cell::Kind::number:
      return detail::format_number(c.number);
    case Cell::Kind::text:
      return c.text;
  }
  return "NA";
}

/// `# key: value` metadata lines, a header row, then one line per row.
inline std::string to_csv(const SweepResult& r) {
  std::string out;
  for (const auto& [k, v] : r.metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline Cell parse_cell(const std::string& s) {
  if (s == "NA") return Cell::na();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return Cell::num(v);
  return Cell::str(s);
}

inline SweepResult parse_csv(const std::string& text) {
  SweepResult r;
  std::stringstream ss(text);
  bool header = false;
  for (std::string line; std::getline(ss, line);) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) throw ConfigError("malformed metadata line: " + line);
      r.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!header) {
      r.columns = fields;
      header = true;
      continue;
    }
    if (fields.size() != r.columns.size()) throw ConfigError("row width does not match the header");
    std::vector<Cell> row;
    for (const auto& f : fields) row.push_back(parse_cell(f));
    r.rows.push_back(std::move(row));
  }
  return r;
}

inline nlohmann::ordered_json to_json(const SweepResult& r) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) {
    if (k == "config")
      meta[k] = nlohmann::ordered_json::parse(v);
    else
      meta[k] = v;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (c.kind == Cell::Kind::na)
        obj[r.columns[i]] = nullptr;
      else if (c.kind == Cell::Kind::number)
        obj[r.columns[i]] = c.number;
      else
        obj[r.columns[i]] = c.text;
    }
    rows.push_back(std::move(obj));
  }
  return {{"metadata", meta}, {"columns", r.columns}, {"rows", rows}};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace hccn
