#pragma once

// Special functions used by the analytic engines.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>

namespace hccn::mathkit {

namespace detail {
inline void check_gamma_args(double k, double theta) {
  if (!(k > 0) || !(theta > 0) || !std::isfinite(k) || !std::isfinite(theta))
    throw std::domain_error("gamma distribution requires k > 0 and theta > 0");
}
inline bool is_integer(double k) { return k == std::floor(k) && k < 1e6; }
}  // namespace detail

/// P[X > y] for X ~ Gamma(k, theta). Integer shapes use the finite Erlang sum
/// (log-domain terms), real shapes the regularized upper incomplete gamma.
inline double gamma_ccdf(double y, double k, double theta) {
  detail::check_gamma_args(k, theta);
  if (!(y > 0)) return 1.0;
  const double x = y / theta;
  if (detail::is_integer(k)) {
    const double lx = std::log(x);
    double sum = 0;
    for (int i = 0; i < static_cast<int>(k); ++i) sum += std::exp(-x + i * lx - std::lgamma(i + 1.0));
    return std::min(sum, 1.0);
  }
  return boost::math::gamma_q(k, x);
}

inline double gamma_cdf(double y, double k, double theta) {
  detail::check_gamma_args(k, theta);
  if (!(y > 0)) return 0.0;
  return boost::math::gamma_p(k, y / theta);
}

inline double gamma_pdf(double y, double k, double theta) {
  detail::check_gamma_args(k, theta);
  if (y < 0) return 0.0;
  if (y == 0) return k < 1 ? INFINITY : (k == 1 ? 1.0 / theta : 0.0);
  return std::exp((k - 1) * std::log(y) - y / theta - std::lgamma(k) - k * std::log(theta));
}

/// log(Gamma(x + a) / Gamma(x)), stable for large x.
inline double log_gamma_ratio(double x, double a) { return std::lgamma(x + a) - std::lgamma(x); }

/// Mean of Nakagami(m, omega): Gamma(m + 1/2) / Gamma(m) * sqrt(omega / m).
inline double nakagami_mean(double m, double omega) {
  if (!(m > 0) || !(omega > 0)) throw std::domain_error("nakagami_mean requires m > 0 and omega > 0");
  return std::exp(log_gamma_ratio(m, 0.5)) * std::sqrt(omega / m);
}

/// Complete exponential Bell polynomial B_n(x_1, ..., x_n), n = x.size().
inline double bell_complete(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> b(n + 1, 0.0);
  b[0] = 1.0;
  std::vector<double> binom{1.0};  // row m of Pascal's triangle
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0;
    for (std::size_t k = 0; k <= m; ++k) acc += binom[k] * b[m - k] * x[k];
    b[m + 1] = acc;
    std::vector<double> next(m + 2, 1.0);
    for (std::size_t k = 1; k <= m; ++k) next[k] = binom[k - 1] + binom[k];
    binom = std::move(next);
  }
  return b[n];
}

/// Scaled Bell sequence: given z_j = x_j / (j-1)! for j = 1..n, returns
/// b_i = B_i(x_1..x_i) / i! for i = 0..n. Avoids the factorial growth of the
/// unscaled recurrence.
inline std::vector<double> bell_scaled(std::span<const double> z) {
  const std::size_t n = z.size();
  std::vector<double> b(n + 1, 0.0);
  b[0] = 1.0;
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0;
    for (std::size_t k = 0; k < m; ++k) acc += b[m - 1 - k] * z[k];
    b[m] = acc / static_cast<double>(m);
  }
  return b;
}

namespace detail {
// Gauss series via Boost's generalized hypergeometric; false when it fails.
inline bool hyp2f1_series(double a, double b, double c, double z, double& out) {
  try {
    out = boost::math::hypergeometric_pFq({a, b}, {c}, z);
    return std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}
}  // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; z) for real arguments and z < 1.
/// |z| < 1/2 uses the defining series; z <= -1/2 the Pfaff transformation
/// (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)).
inline double gauss_2f1(double a, double b, double c, double z) {
  if (c <= 0 && c == std::floor(c)) throw std::domain_error("gauss_2f1: c is a non-positive integer");
  if (!(z < 1)) throw std::domain_error("gauss_2f1: z must be < 1");
  double out = 0;
  if (z == 0) return 1.0;
  if (std::abs(z) < 0.5 || z > 0) {
    if (!detail::hyp2f1_series(a, b, c, z, out)) throw std::domain_error("gauss_2f1: series did not converge");
    return out;
  }
  const double w = z / (z - 1.0);
  if (!detail::hyp2f1_series(a, c - b, c, w, out))
    throw std::domain_error("gauss_2f1: transformed series did not converge");
  return std::pow(1.0 - z, -a) * out;
}

}  // namespace hccn::mathkit
