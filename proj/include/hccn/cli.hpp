#pragma once

// The `hccn` command line. run() is the whole program; main() only forwards
// to it so the tests can drive it in-process.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hccn/coverage.hpp"
#include "hccn/errors.hpp"
#include "hccn/mcsim/estimate.hpp"
#include "hccn/params.hpp"
#include "hccn/rate.hpp"
#include "hccn/sweep.hpp"

namespace hccn::cli {

namespace detail {

struct Common {
  std::string config;
  std::vector<std::string> sets;
};

inline void add_common(CLI::App& sub, Common& c) {
  sub.add_option("--config", c.config, "JSON parameter file (default: the reference operating point)");
  sub.add_option("--set", c.sets, "Override a parameter, key=value (repeatable)");
}

inline NetworkParams resolve(const Common& c) {
  NetworkParams p = c.config.empty() ? reference_params() : load_config(c.config);
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    const std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (...) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ConfigError("--set " + kv + ": value is not a number");
    set_config_value(p, kv.substr(0, eq), v);
  }
  return p;
}

inline void require_valid(const NetworkParams& p, std::ostream& err, bool ap_only = false) {
  std::vector<std::string> errs = validate(p);
  if (ap_only) std::erase(errs, std::string("lambda_U must exceed lambda_B"));
  if (!errs.empty()) {
    std::string all;
    for (const auto& e : errs) all += (all.empty() ? "" : "; ") + e;
    throw ConfigError(all);
  }
  for (const auto& w : warnings(p)) err << "warning: " << w << "\n";
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string estimate_line(const mcsim::Estimate& a, const mcsim::Estimate& e, std::uint64_t resampled) {
  return num(a.mean) + " +/- " + num(a.ci_half_width) + " (exact " + num(e.mean) + " +/- " + num(e.ci_half_width) +
         ", trials " + std::to_string(a.trials) + ", seed " + std::to_string(a.seed) + ", resampled " +
         std::to_string(resampled) + ")";
}

}  // namespace detail

/// Runs the command line. Exit codes: 0 success, 1 usage or validation error,
/// 2 numeric failure (the failing module is named on `err`).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Coverage and rate of hybrid cellular / cell-free networks", "hccn"};
  app.require_subcommand(1);

  detail::Common common;
  double t_db = 5;
  std::uint64_t trials = 2500, seed = 1;
  bool bits = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a parameter set");
  detail::add_common(*validate_cmd, common);

  auto* coverage_cmd = app.add_subcommand("coverage", "Analytic coverage probability");
  detail::add_common(*coverage_cmd, common);
  coverage_cmd->add_option("--T-dB", t_db, "SINR threshold, dB");

  auto* rate_cmd = app.add_subcommand("rate", "Analytic average rate");
  detail::add_common(*rate_cmd, common);
  rate_cmd->add_flag("--bits", bits, "Report bits/s/Hz instead of nats/s/Hz");

  auto* mc_cov_cmd = app.add_subcommand("mc-coverage", "Monte Carlo coverage probability");
  detail::add_common(*mc_cov_cmd, common);
  mc_cov_cmd->add_option("--T-dB", t_db, "SINR threshold, dB");
  mc_cov_cmd->add_option("--trials", trials, "Number of deployments");
  mc_cov_cmd->add_option("--seed", seed, "Master seed");

  auto* mc_rate_cmd = app.add_subcommand("mc-rate", "Monte Carlo average rate");
  detail::add_common(*mc_rate_cmd, common);
  mc_rate_cmd->add_option("--trials", trials, "Number of deployments");
  mc_rate_cmd->add_option("--seed", seed, "Master seed");
  mc_rate_cmd->add_flag("--bits", bits, "Report bits/s/Hz instead of nats/s/Hz");

  std::uint64_t ap_trials = 10000;
  auto* ap_cmd = app.add_subcommand("ap-terms", "Analytic and Monte Carlo AP signal / interference means");
  detail::add_common(*ap_cmd, common);
  ap_cmd->add_option("--trials", ap_trials, "Number of deployments");
  ap_cmd->add_option("--seed", seed, "Master seed");

  SweepSpec spec;
  std::string param, values, engines = "both", metric = "coverage", out_path, format = "csv", preset, timestamp;
  std::optional<double> sweep_t_db;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over one or both engines");
  detail::add_common(*sweep_cmd, common);
  sweep_cmd->add_option("--preset", preset, "Named sweep preset (fig4 .. fig9)");
  sweep_cmd->add_option("--param", param, "Swept parameter (T_dB or a config key)");
  sweep_cmd->add_option("--values", values, "start:step:stop or a comma list");
  sweep_cmd->add_option("--engines", engines, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  sweep_cmd->add_option("--metric", metric, "coverage or rate")->check(CLI::IsMember({"coverage", "rate"}));
  sweep_cmd->add_option("--T-dB", sweep_t_db, "Fixed SINR threshold when T_dB is not swept");
  sweep_cmd->add_option("--trials", trials, "Monte Carlo deployments per grid point");
  sweep_cmd->add_option("--seed", seed, "Master seed");
  sweep_cmd->add_option("--out", out_path, "Output file (default: standard output)");
  sweep_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--timestamp", timestamp, "Timestamp written to the metadata (default: now)");
  sweep_cmd->add_flag("--bits", bits, "Report rates in bits/s/Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const NetworkParams p = detail::resolve(common);
    if (validate_cmd->parsed()) {
      detail::require_valid(p, err);
      out << "OK\n";
      return 0;
    }
    if (coverage_cmd->parsed()) {
      detail::require_valid(p, err);
      out << detail::num(coverage(p, db_to_linear(t_db))) << "\n";
      return 0;
    }
    if (rate_cmd->parsed()) {
      detail::require_valid(p, err);
      out << detail::num(rate(p) / (bits ? std::numbers::ln2 : 1.0)) << "\n";
      return 0;
    }
    if (mc_cov_cmd->parsed()) {
      detail::require_valid(p, err);
      const auto e = mcsim::estimate_coverage(p, db_to_linear(t_db), trials, seed);
      out << detail::estimate_line(e.approx, e.exact, e.resampled) << "\n";
      return 0;
    }
    if (mc_rate_cmd->parsed()) {
      detail::require_valid(p, err);
      auto e = mcsim::estimate_rate(p, trials, seed);
      const double unit = bits ? 1.0 / std::numbers::ln2 : 1.0;
      for (auto* est : {&e.approx, &e.exact}) est->mean *= unit, est->ci_half_width *= unit;
      out << detail::estimate_line(e.approx, e.exact, e.resampled) << "\n";
      return 0;
    }
    if (ap_cmd->parsed()) {
      detail::require_valid(p, err, true);
      const ApAggregates a = ap_aggregates(p, derive(p));
      const auto e = mcsim::estimate_ap_terms(p, ap_trials, seed);
      out << "L_A analytic " << detail::num(a.mean_signal) << " mc " << detail::num(e.signal.mean) << " +/- "
          << detail::num(e.signal.ci_half_width) << "\n";
      out << "I_A analytic " << detail::num(a.mean_interference) << " mc " << detail::num(e.interference.mean)
          << " +/- " << detail::num(e.interference.ci_half_width) << "\n";
      return 0;
    }
    // sweep
    spec.base = p;
    spec.threshold_db = 5;
    if (!preset.empty()) {
      const Preset* pr = find_preset(preset);
      if (!pr) throw ConfigError("unknown preset '" + preset + "'");
      spec.param = pr->param;
      spec.values = parse_values(pr->values);
      spec.metric = pr->metric;
      spec.threshold_db = pr->threshold_db;
    }
    if (!param.empty()) spec.param = param;
    if (!values.empty()) spec.values = parse_values(values);
    if (preset.empty() || sweep_cmd->count("--metric")) spec.metric = metric == "rate" ? Metric::rate : Metric::coverage;
    if (sweep_t_db) spec.threshold_db = *sweep_t_db;
    if (preset.empty() && param.empty()) throw ConfigError("sweep needs --param or --preset");
    if (spec.values.empty()) throw ConfigError("sweep needs --values or --preset");
    spec.engines = engines == "analytic" ? Engines::analytic : engines == "mc" ? Engines::mc : Engines::both;
    spec.trials = trials;
    spec.seed = seed;
    spec.bits = bits;
    for (const auto& w : warnings(p)) err << "warning: " << w << "\n";
    const SweepResult result =
        run_sweep(spec, timestamp.empty() ? std::nullopt : std::optional<std::string>(timestamp));
    const std::string text = format == "json" ? to_json(result).dump(2) + "\n" : to_csv(result);
    if (out_path.empty()) {
      out << text;
    } else {
      write_file(out_path, text);
      out << "wrote " << result.rows.size() << " rows (" << spec.param << ", " << to_string(spec.metric) << ", "
          << to_string(spec.engines) << ") to " << out_path << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    err << "numeric failure in " << e.module() << ": " << e.what() << "\n";
    return 2;
  } catch (const DegenerateDistributionError& e) {
    err << "numeric failure in moments: " << e.what() << "\n";
    return 2;
  } catch (const NoServingBsError& e) {
    err << "numeric failure in mcsim: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "numeric failure in mathkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hccn::cli
