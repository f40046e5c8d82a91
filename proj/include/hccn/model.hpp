#pragma once

// Scalar inputs of the analytic coverage and rate engines, plus the Laplace
// exponent of the inter-cell interference shared by both.

#include <cmath>
#include <complex>
#include <numbers>

#include "hccn/mathkit/quadrature.hpp"
#include "hccn/moments.hpp"
#include "hccn/params.hpp"

namespace hccn {

/// Everything the analytic engines read. Built from NetworkParams by
/// analytic_model(); tests construct degenerate variants directly.
struct AnalyticModel {
  double lambda_bs = 0;  // 1/m^2
  double alpha_bs = 0;
  double radius = 0;  // m
  double beta0 = 0;
  double rho_bs = 0;  // W
  double mean_ues_per_bs = 1;
  double antennas_bs = 1;
  double ap_signal = 0;        // L_A
  double ap_interference = 0;  // mean AP interference, W
  double noise_power = 0;      // W
  bool include_intercell = true;

  double interference_plus_noise() const { return ap_interference + noise_power; }

  SignalContext signal() const {
    return {rho_bs, beta0, alpha_bs, antennas_bs, ap_signal, mean_ues_per_bs};
  }
};

inline AnalyticModel analytic_model(const NetworkParams& p) {
  const DerivedParams d = derive(p);
  const ApAggregates ap = ap_aggregates(p, d);
  AnalyticModel m;
  m.lambda_bs = p.lambda_bs;
  m.alpha_bs = p.alpha_bs;
  m.radius = p.radius;
  m.beta0 = d.beta0;
  m.rho_bs = d.rho_bs;
  m.mean_ues_per_bs = d.mean_ues_per_bs;
  m.antennas_bs = p.antennas_bs;
  m.ap_signal = ap.mean_signal;
  m.ap_interference = ap.mean_interference;
  m.noise_power = d.noise_power;
  return m;
}

namespace detail {

inline std::complex<double> log1p_c(std::complex<double> x) {
  if (std::abs(x) < 1e-4) return x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x)));
  return std::log(1.0 + x);
}
inline std::complex<double> expm1_c(std::complex<double> z) {
  if (std::abs(z) < 1e-4) return z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
  return std::exp(z) - 1.0;
}
inline double log1p_c(double x) { return std::log1p(x); }
inline double expm1_c(double z) { return std::expm1(z); }

}  // namespace detail

inline constexpr double kIntercellRelTol = 1e-9;

/// 2 pi lambda_B * int_{d00}^{R} [(1 + K r^-alpha)^(-phi) - 1] r dr, the log of
/// the inter-cell interference Laplace transform with K = s * scale. Works for
/// real K >= 0 and complex K off the negative real axis. The integral is taken
/// in log r.
template <class Scalar>
Scalar intercell_log_laplace(Scalar K, double d00, const AnalyticModel& m) {
  if (!m.include_intercell || !(d00 < m.radius) || K == Scalar(0)) return Scalar(0);
  const double phi = m.mean_ues_per_bs;
  const double alpha = m.alpha_bs;
  auto integrand = [&](double t) -> Scalar {
    const double r2 = std::exp(2.0 * t);
    const Scalar x = K * std::exp(-alpha * t);
    return detail::expm1_c(-phi * detail::log1p_c(x)) * r2;
  };
  const double lo = std::log(d00), hi = std::log(m.radius);
  // Absolute floor relative to the small-K asymptote -phi*K*int r^{1-alpha} dr.
  const double scale = phi * std::abs(K) * std::pow(d00, 2.0 - alpha) / (alpha - 2.0);
  const double floor = 1e-13 * std::min(scale, m.radius * m.radius) + 1e-300;
  const Scalar integral = mathkit::integrate_rel(integrand, lo, hi, kIntercellRelTol, floor);
  return 2.0 * std::numbers::pi * m.lambda_bs * integral;
}

/// Nearest-BS distance density on the disk, normalized to integrate to 1 on
/// [0, R].
inline double nearest_bs_pdf(double r, double lambda_bs, double radius) {
  if (r < 0 || r > radius) throw std::domain_error("nearest_bs_pdf: r outside [0, R]");
  const double p_area = -std::expm1(-lambda_bs * std::numbers::pi * radius * radius);
  return 2.0 * lambda_bs * std::numbers::pi * r * std::exp(-lambda_bs * std::numbers::pi * r * r) / p_area;
}

inline double nearest_bs_pdf(double r, const AnalyticModel& m) { return nearest_bs_pdf(r, m.lambda_bs, m.radius); }

inline constexpr int kDistanceNodes = 64;

}  // namespace hccn
