#pragma once

// Means of the AP-side terms, raw moments of the aggregated desired signal and
// Gamma moment matching.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hccn/errors.hpp"
#include "hccn/mathkit/special.hpp"
#include "hccn/params.hpp"

namespace hccn {

struct MatchedGamma {
  double k = 0;      // shape
  double theta = 0;  // scale, W

  double mean() const { return k * theta; }
  double variance() const { return k * theta * theta; }
};

struct RawMoments {
  double first = 0;
  double second = 0;
};

struct ApAggregates {
  double mean_signal = 0;        // L_A, sqrt(W)
  double mean_interference = 0;  // mean AP interference, W
  double interference_plus_noise = 0;
};

/// Mean amplitude of the coherent AP contribution to the desired signal.
inline double mean_ap_signal(const NetworkParams& p, const DerivedParams& d) {
  if (!(p.alpha_ap < 4)) throw std::domain_error("mean_ap_signal requires alpha2 < 4");
  const double gain_ratio = std::exp(mathkit::log_gamma_ratio(p.antennas_ap, 0.5));
  return 4.0 * std::numbers::pi * std::sqrt(d.rho_ap) * p.lambda_ap * std::sqrt(d.delta0) / (4.0 - p.alpha_ap) *
         gain_ratio * std::pow(d.area / std::numbers::pi, 1.0 - p.alpha_ap / 4.0);
}

/// Mean power leaked by the AP beams aimed at the other UEs.
inline double mean_ap_interference(const NetworkParams& p, const DerivedParams& d) {
  if (!(p.alpha_ap < 2)) throw std::domain_error("mean_ap_interference requires alpha2 < 2");
  const double others = p.lambda_ue * d.area - 1.0;
  if (others < 0) throw std::domain_error("mean_ap_interference requires lambda_U * area >= 1");
  return 2.0 * std::numbers::pi * d.rho_ap * p.lambda_ap * d.delta0 * others / (2.0 - p.alpha_ap) *
         std::pow(d.area / std::numbers::pi, 1.0 - p.alpha_ap / 2.0);
}

inline ApAggregates ap_aggregates(const NetworkParams& p, const DerivedParams& d) {
  ApAggregates a;
  a.mean_signal = mean_ap_signal(p, d);
  a.mean_interference = mean_ap_interference(p, d);
  a.interference_plus_noise = a.mean_interference + d.noise_power;
  return a;
}

/// Inputs of the per-distance signal moments.
struct SignalContext {
  double rho_bs = 0;
  double beta0 = 0;
  double alpha_bs = 0;
  double antennas_bs = 1;
  double ap_signal = 0;        // L_A
  double mean_ues_per_bs = 1;  // |phi_B|, real-valued
};

inline SignalContext signal_context(const NetworkParams& p, const DerivedParams& d, double ap_signal) {
  return {d.rho_bs, d.beta0, p.alpha_bs, static_cast<double>(p.antennas_bs), ap_signal, d.mean_ues_per_bs};
}

namespace detail {
inline void check_distance(double d00) {
  if (!(d00 > 0)) throw std::domain_error("serving distance must be > 0");
}
}  // namespace detail

/// E[S0] and E[S0^2] at serving distance d00, where
/// S0 = (sqrt(rho_B) ||h_00|| + L_A)^2 and ||h_00||^2 ~ Gamma(N_B, beta_00).
inline RawMoments s0_moments(double d00, const SignalContext& c) {
  detail::check_distance(d00);
  const double b = c.rho_bs * c.beta0 * std::pow(d00, -c.alpha_bs);  // rho_B * beta_00
  const double sb = std::sqrt(b);
  const double n = c.antennas_bs;
  const double g_half = std::exp(mathkit::log_gamma_ratio(n, 0.5));
  const double g_three_half = std::exp(mathkit::log_gamma_ratio(n, 1.5));
  const double la = c.ap_signal;
  RawMoments m;
  m.first = b * n + 2.0 * sb * la * g_half + la * la;
  m.second = b * b * n * (n + 1) + 4.0 * b * sb * la * g_three_half + 6.0 * b * la * la * n +
             4.0 * sb * la * la * la * g_half + la * la * la * la;
  return m;
}

/// E[S_I] and E[S_I^2] for S_I = S0 + I_B0, including the correlation of the
/// intra-cell interference with the serving channel.
inline RawMoments si_moments(double d00, const SignalContext& c) {
  detail::check_distance(d00);
  const double b = c.rho_bs * c.beta0 * std::pow(d00, -c.alpha_bs);
  const double sb = std::sqrt(b);
  const double n = c.antennas_bs;
  const double phi = c.mean_ues_per_bs;
  const double g_half = std::exp(mathkit::log_gamma_ratio(n, 0.5));
  const double g_three_half = std::exp(mathkit::log_gamma_ratio(n, 1.5));
  const double la = c.ap_signal;
  RawMoments m;
  m.first = b * (n + phi - 1.0) + 2.0 * sb * la * g_half + la * la;
  m.second = b * b * ((n + phi) * (n + phi) + phi - n - 2.0) +
             4.0 * b * sb * la * g_three_half * (1.0 + (phi - 1.0) / n) + b * la * la * (6.0 * n + 2.0 * phi - 2.0) +
             4.0 * sb * la * la * la * g_half + la * la * la * la;
  return m;
}

/// Gamma(k, theta) with the given first two raw moments.
inline MatchedGamma match_gamma(double mean, double second_moment) {
  if (!(mean > 0)) throw DegenerateDistributionError("match_gamma requires a positive mean");
  const double var = second_moment - mean * mean;
  if (!(var > 0)) throw DegenerateDistributionError("match_gamma requires a positive variance");
  return {mean * mean / var, var / mean};
}

inline MatchedGamma match_gamma(const RawMoments& m) { return match_gamma(m.first, m.second); }

}  // namespace hccn
