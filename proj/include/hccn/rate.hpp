#pragma once

// Analytic average achievable rate (nats/s/Hz).
//
// E[ln(1 + S/I)] = int_0^inf (e^{-s I_e}/s) L_IB(s) [L_IB0(s) - L_{S0+IB0}(s)] ds
// with S0 + I_B0 replaced by a matched Gamma, then averaged over the
// nearest-BS distance.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "hccn/errors.hpp"
#include "hccn/mathkit/quadrature.hpp"
#include "hccn/model.hpp"
#include "hccn/moments.hpp"
#include "hccn/parallel.hpp"

namespace hccn {

struct RateOptions {
  double tail_tol = 1e-8;    // truncated tail relative to the running integral
  double panel_tol = 1e-10;  // relative, per s-panel
  int threads = 0;
};

class RateContext {
 public:
  explicit RateContext(AnalyticModel model, RateOptions opt = {}) : model_(std::move(model)), opt_(opt) {}

  const AnalyticModel& model() const { return model_; }
  const RateOptions& options() const { return opt_; }
  double interference_plus_noise() const { return model_.interference_plus_noise(); }

  /// Matched Gamma law of S_I = S0 + I_B0. Undefined (throws) when rho_B = 0.
  MatchedGamma si_gamma(double d00) const { return match_gamma(si_moments(d00, model_.signal())); }

  /// E[S0] at d00.
  double mean_signal(double d00) const {
    if (model_.rho_bs == 0) return model_.ap_signal * model_.ap_signal;
    return s0_moments(d00, model_.signal()).first;
  }

 private:
  AnalyticModel model_;
  RateOptions opt_;
};

/// Laplace transform of the inter-cell interference I_B given d00.
inline double laplace_ib(double s, double d00, const RateContext& ctx) {
  const AnalyticModel& m = ctx.model();
  return std::exp(intercell_log_laplace(s * m.rho_bs * m.beta0, d00, m));
}

/// Laplace transform of the intra-cell interference I_B0 given d00.
inline double laplace_ib0(double s, double d00, const RateContext& ctx) {
  const AnalyticModel& m = ctx.model();
  return std::exp((1.0 - m.mean_ues_per_bs) * std::log1p(s * m.rho_bs * m.beta0 * std::pow(d00, -m.alpha_bs)));
}

namespace detail {
inline double log_laplace_si(double s, double d00, const RateContext& ctx) {
  const AnalyticModel& m = ctx.model();
  if (m.rho_bs == 0) return -s * m.ap_signal * m.ap_signal;
  const MatchedGamma g = ctx.si_gamma(d00);
  return -g.k * std::log1p(s * g.theta);
}
}  // namespace detail

/// Laplace transform of the matched Gamma approximation of S0 + I_B0.
inline double laplace_si(double s, double d00, const RateContext& ctx) {
  return std::exp(detail::log_laplace_si(s, d00, ctx));
}

/// Mean rate given the serving distance.
inline double rate_at_distance(double d00, const RateContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const double ie = ctx.interference_plus_noise();
  if (!(ie > 0)) throw NumericError("rate", "rate integral has no exponential envelope: I_e must be > 0");
  const double mean_s0 = ctx.mean_signal(d00);
  if (mean_s0 == 0) return 0.0;

  const double phi = m.mean_ues_per_bs;
  const double b00 = m.rho_bs * m.beta0 * std::pow(d00, -m.alpha_bs);
  std::optional<MatchedGamma> si;
  if (m.rho_bs != 0) si = ctx.si_gamma(d00);
  const double si_mean = si ? si->mean() : mean_s0;

  auto integrand = [&](double s) {
    const double log_ib0 = (1.0 - phi) * std::log1p(s * b00);
    const double log_si = si ? -si->k * std::log1p(s * si->theta) : -s * mean_s0;
    // L_IB0 - L_SI = L_SI * expm1(log L_IB0 - log L_SI), both logs <= 0
    const double diff = std::exp(log_si) * std::expm1(log_ib0 - log_si);
    const double ib = intercell_log_laplace(s * m.rho_bs * m.beta0, d00, m);
    return std::exp(-s * ie + ib) * diff / s;
  };

  // Panels: a first one well inside the flat region, then decades. The
  // integrand is bounded by e^{-s I_e} / s, so the tail beyond s is at most
  // E1(s I_e).
  const double s_scale = 1.0 / std::max(si_mean, ie);
  double lo = 0, hi = 1e-3 * s_scale;
  double total = 0;
  for (int panel = 0; panel < 400; ++panel) {
    const double part =
        mathkit::integrate_rel(integrand, lo, hi, ctx.options().panel_tol, 1e-300 + 1e-14 * std::abs(total));
    total += part;
    const double tail = boost::math::expint(1, hi * ie);
    if (tail <= ctx.options().tail_tol * total || (total == 0 && tail < 1e-300)) return total;
    lo = hi;
    hi *= 10.0;
  }
  throw NumericError("rate", "rate integral truncation bound not reached");
}

struct RateReport {
  double value = 0;
  double k_min = std::numeric_limits<double>::infinity();  // matched shape of S0 over evaluated nodes
  double k_max = -std::numeric_limits<double>::infinity();
};

/// Average rate over the nearest-BS distance on [0, R].
inline RateReport rate_report(const RateContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const mathkit::GaussRule rule = mathkit::gauss_legendre(kDistanceNodes, 0.0, m.radius);
  const std::size_t n = rule.nodes.size();
  std::vector<double> contrib(n, 0.0), shape(n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(
      n,
      [&](std::size_t i) {
        const double w = rule.weights[i] * nearest_bs_pdf(rule.nodes[i], m);
        if (w < 1e-12) return;
        contrib[i] = w * rate_at_distance(rule.nodes[i], ctx);
        if (m.rho_bs != 0) shape[i] = match_gamma(s0_moments(rule.nodes[i], m.signal())).k;
      },
      ctx.options().threads);
  RateReport r;
  r.value = pairwise_sum(contrib);
  for (double k : shape) {
    if (std::isnan(k)) continue;
    r.k_min = std::min(r.k_min, k);
    r.k_max = std::max(r.k_max, k);
  }
  return r;
}

inline double rate(const RateContext& ctx) { return rate_report(ctx).value; }

inline double rate(const NetworkParams& p, RateOptions opt = {}) { return rate(RateContext(analytic_model(p), opt)); }

}  // namespace hccn
