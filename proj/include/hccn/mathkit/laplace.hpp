#pragma once

// Numerical inversion of Laplace transforms of CDFs.
//
// The primary method is the fixed Talbot contour; the Euler-accelerated
// Bromwich series serves as the independent check. Step-like transforms (where
// the Fourier series method suffers from Gibbs oscillation) fall back to a
// second Talbot contour with a different node count.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "hccn/errors.hpp"

namespace hccn::mathkit {

using cplx = std::complex<double>;

/// s -> F(s), evaluated through its complex logarithm so that e^{st} F(s) can be
/// formed without intermediate overflow. F must be analytic for Re(s) > 0 and
/// off the negative real axis.
struct LaplaceFn {
  std::function<cplx(cplx)> log_eval;

  cplx operator()(cplx s) const { return std::exp(log_eval(s)); }

  static LaplaceFn from_log(std::function<cplx(cplx)> f) { return {std::move(f)}; }
  static LaplaceFn from_value(std::function<cplx(cplx)> f) {
    return {[f = std::move(f)](cplx s) { return std::log(f(s)); }};
  }
};

struct InversionOptions {
  int talbot_nodes = 48;
  int check_nodes = 32;
  int euler_terms = 15;
  int euler_averaging = 11;
  double euler_abscissa = 18.4;  // discretization error ~ e^{-A}
  double agreement = 1e-4;
};

/// Fixed Talbot inversion (Abate & Valko) with M nodes at t > 0.
inline double talbot_invert(const LaplaceFn& F, double t, int M) {
  const double r = 2.0 * M / (5.0 * t);
  double acc = 0.5 * std::exp(std::real(F.log_eval(cplx(r, 0))) + r * t);
  for (int k = 1; k < M; ++k) {
    const double th = k * std::numbers::pi / M;
    const double cot = std::cos(th) / std::sin(th);
    const cplx s(r * th * cot, r * th);
    const double sigma = th + (th * cot - 1.0) * cot;
    const cplx term = std::exp(t * s + F.log_eval(s)) * cplx(1.0, sigma);
    acc += std::real(term);
  }
  return r / M * acc;
}

/// Euler-accelerated Fourier series on the Bromwich line (Abate & Whitt).
inline double euler_invert(const LaplaceFn& F, double t, int n = 15, int m = 11, double A = 18.4) {
  const double a = A / (2.0 * t);
  const double h = std::numbers::pi / t;
  std::vector<double> partial(n + m + 1);
  double sum = 0.5 * std::real(F(cplx(a, 0)));
  partial[0] = sum;
  for (int k = 1; k <= n + m; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::real(F(cplx(a, k * h)));
    partial[k] = sum;
  }
  double avg = 0, binom = 1;
  for (int j = 0; j <= m; ++j) {
    avg += binom * partial[n + j];
    binom = binom * (m - j) / (j + 1);
  }
  avg *= std::pow(2.0, -m);
  return std::exp(A / 2.0) / t * avg;
}

/// CDF value F_X(x) from F(s) = L_X(s) / s. The result is clamped to [0, 1].
///
/// Talbot(talbot_nodes) is the primary value and the Euler series the check.
/// When they disagree, a Talbot contour with check_nodes decides which of the
/// two is trusted (the larger contour can reach regions near the branch cut
/// where F is too large for the sum to cancel). Throws InversionError when no
/// pair agrees within `opt.agreement`.
inline double inverse_laplace_cdf(const LaplaceFn& F, double x, const InversionOptions& opt = {}) {
  if (!(x > 0)) throw std::domain_error("inverse_laplace_cdf requires x > 0");
  auto clamp = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  auto close = [&](double a, double b) { return std::isfinite(a) && std::isfinite(b) && std::abs(a - b) <= opt.agreement; };
  const double primary = talbot_invert(F, x, opt.talbot_nodes);
  const double euler = euler_invert(F, x, opt.euler_terms, opt.euler_averaging, opt.euler_abscissa);
  if (close(primary, euler)) return clamp(primary);
  const double check = talbot_invert(F, x, opt.check_nodes);
  if (close(primary, check)) return clamp(primary);
  if (close(euler, check)) return clamp(euler);
  std::ostringstream msg;
  msg << "Laplace inversion at x=" << x << " inconsistent: talbot " << primary << ", euler " << euler << ", talbot("
      << opt.check_nodes << ") " << check;
  throw InversionError(msg.str(), primary, euler);
}

}  // namespace hccn::mathkit
