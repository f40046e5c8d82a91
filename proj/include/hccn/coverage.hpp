#pragma once

// Analytic coverage probability of the typical UE.
//
// Per serving distance d00 the desired signal is approximated by a matched
// Gamma(k, theta). For small k the Gamma CCDF is expanded into derivatives of
// the interference Laplace transform (Bell polynomials of the derivatives of
// its logarithm g); for large k the signal is replaced by its mean and the
// coverage becomes a CDF of the BS interference. The result is averaged over
// the nearest-BS distance with a fixed Gauss-Legendre rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "hccn/errors.hpp"
#include "hccn/mathkit/laplace.hpp"
#include "hccn/mathkit/quadrature.hpp"
#include "hccn/mathkit/special.hpp"
#include "hccn/model.hpp"
#include "hccn/moments.hpp"
#include "hccn/parallel.hpp"

namespace hccn {

struct CoverageOptions {
  double k_switch = 40;
  mathkit::InversionOptions inversion{};
  double convolution_tol = 1e-7;  // absolute, on the probability
  int threads = 0;                // d00 nodes evaluated in parallel; 0 = default
};

class CoverageContext {
 public:
  CoverageContext(AnalyticModel model, double threshold, CoverageOptions opt = {})
      : model_(std::move(model)), threshold_(threshold), opt_(opt) {
    if (!(threshold > 0)) throw std::domain_error("coverage threshold must be > 0");
  }

  const AnalyticModel& model() const { return model_; }
  double threshold() const { return threshold_; }
  const CoverageOptions& options() const { return opt_; }
  double interference_plus_noise() const { return model_.interference_plus_noise(); }

  /// Matched Gamma law of S0 at distance d00.
  MatchedGamma signal_gamma(double d00) const { return match_gamma(s0_moments(d00, model_.signal())); }

  /// T * rho_B * beta0 / theta_S0.
  double t_theta(double d00) const { return t_theta(signal_gamma(d00)); }
  double t_theta(const MatchedGamma& g) const { return threshold_ * model_.rho_bs * model_.beta0 / g.theta; }

 private:
  AnalyticModel model_;
  double threshold_;
  CoverageOptions opt_;
};

/// Laplace transform of T * I_B0 / theta_S0 at s.
inline double laplace_y_ib0(double s, double d00, const CoverageContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const double c = s * ctx.t_theta(d00) * std::pow(d00, -m.alpha_bs);
  return std::exp((1.0 - m.mean_ues_per_bs) * std::log1p(c));
}

/// Laplace transform of T * I_B / theta_S0 at s.
inline double laplace_y_ib(double s, double d00, const CoverageContext& ctx) {
  return std::exp(intercell_log_laplace(s * ctx.t_theta(d00), d00, ctx.model()));
}

/// g(s) = log of the Laplace transform of T * (I_B0 + I_B + I_e) / theta_S0.
inline double g_value(double s, double d00, const CoverageContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const MatchedGamma sg = ctx.signal_gamma(d00);
  const double tt = ctx.t_theta(sg);
  return -s * ctx.threshold() * ctx.interference_plus_noise() / sg.theta +
         (1.0 - m.mean_ues_per_bs) * std::log1p(s * tt * std::pow(d00, -m.alpha_bs)) +
         intercell_log_laplace(s * tt, d00, m);
}

namespace detail {

// z_j = (-1)^j g^(j)(1) / (j-1)! for j = 1..n. Every z_j is non-negative.
inline std::vector<double> scaled_g_derivatives(int n, double d00, const CoverageContext& ctx,
                                                const MatchedGamma& sg) {
  const AnalyticModel& m = ctx.model();
  const double phi = m.mean_ues_per_bs;
  const double tt = ctx.t_theta(sg);
  const double c = tt * std::pow(d00, -m.alpha_bs);
  const double ratio = c / (1.0 + c);
  std::vector<double> z(n, 0.0);
  z[0] = ctx.threshold() * ctx.interference_plus_noise() / sg.theta;
  for (int i = 1; i <= n; ++i) z[i - 1] += (phi - 1.0) * std::pow(ratio, i);
  if (!m.include_intercell || !(d00 < m.radius) || tt == 0) return z;

  const double log_tt = std::log(tt);
  const double lo = std::log(d00), hi = std::log(m.radius);
  for (int i = 1; i <= n; ++i) {
    // u = tt * r^-alpha; integrand (u/(1+u))^i (1+u)^-phi r^2 in t = ln r.
    auto integrand = [&](double t) {
      const double log_u = log_tt - m.alpha_bs * t;
      const double inv_u = std::exp(-log_u);
      const double u = std::exp(log_u);
      return std::exp(-i * std::log1p(inv_u) - phi * std::log1p(u) + 2.0 * t);
    };
    const double integral = mathkit::integrate_rel(integrand, lo, hi, 1e-10, 1e-300);
    const double pochhammer = std::exp(std::lgamma(phi + i) - std::lgamma(phi) - std::lgamma(static_cast<double>(i)));
    z[i - 1] += 2.0 * std::numbers::pi * m.lambda_bs * pochhammer * integral;
  }
  return z;
}

// Partial sums p_0 .. p_n of the Gamma-CCDF expansion at the matched theta;
// nullopt when they are not trustworthy.
inline std::optional<std::vector<double>> bell_partial_sums(int n, double d00, const CoverageContext& ctx,
                                                            const MatchedGamma& sg) {
  std::vector<double> p(n + 1, 0.0);
  if (n == 0) return p;
  const std::vector<double> z = scaled_g_derivatives(n, d00, ctx, sg);
  const std::vector<double> b = mathkit::bell_scaled(z);
  const double g1 = g_value(1.0, d00, ctx);
  double sum = 0, comp = 0;  // Neumaier summation
  for (int i = 0; i < n; ++i) {
    const double term = b[i] > 0 ? std::exp(g1 + std::log(b[i])) : 0.0;
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    p[i + 1] = sum + comp;
    if (!std::isfinite(p[i + 1]) || std::abs(p[i + 1]) > 10.0) return std::nullopt;
  }
  return p;
}

inline double clamp_probability(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace detail

/// Derivatives d^i g / ds^i at s = 1 for i = 1..n.
inline std::vector<double> g_derivatives(int n, double d00, const CoverageContext& ctx) {
  if (n < 1) throw std::domain_error("g_derivatives requires n >= 1");
  std::vector<double> z = detail::scaled_g_derivatives(n, d00, ctx, ctx.signal_gamma(d00));
  double fact = 1;  // (i-1)!
  for (int i = 1; i <= n; ++i) {
    z[i - 1] *= (i % 2 == 0 ? 1.0 : -1.0) * fact;
    fact *= i;
  }
  return z;
}

/// Gamma-CCDF expansion with integer shape k_int at the matched theta.
inline double coverage_at_distance_bell(double d00, const CoverageContext& ctx, int k_int) {
  if (k_int < 0) throw std::domain_error("coverage_at_distance_bell requires k_int >= 0");
  const auto p = detail::bell_partial_sums(k_int, d00, ctx, ctx.signal_gamma(d00));
  if (!p) throw NumericError("coverage", "Bell expansion ill-conditioned: partial sums exceed 10");
  return detail::clamp_probability(p->back());
}

/// CDF of the inter-cell interference I_B at x given d00, by numerical Laplace
/// inversion.
inline double intercell_cdf(double x, double d00, const AnalyticModel& m, const mathkit::InversionOptions& opt = {}) {
  if (!(x > 0)) return 0.0;
  if (!m.include_intercell || !(d00 < m.radius) || m.rho_bs == 0) return 1.0;
  const double scale = m.rho_bs * m.beta0;
  const auto F = mathkit::LaplaceFn::from_log(
      [&](mathkit::cplx s) { return intercell_log_laplace<mathkit::cplx>(s * scale, d00, m) - std::log(s); });
  return mathkit::inverse_laplace_cdf(F, x, opt);
}

/// Coverage with the signal replaced by its mean: P[I_B0 + I_B < S0_mean/T - I_e].
inline double coverage_large_k(double d00, const CoverageContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const MatchedGamma sg = ctx.signal_gamma(d00);
  const double margin = sg.mean() / ctx.threshold() - ctx.interference_plus_noise();
  if (!(margin > 0)) return 0.0;
  const double shape = m.mean_ues_per_bs - 1.0;
  auto F = [&](double x) { return intercell_cdf(x, d00, m, ctx.options().inversion); };
  if (shape <= 0) return F(margin);
  const double scale = m.rho_bs * m.beta0 * std::pow(d00, -m.alpha_bs);
  mathkit::QuadOptions q;
  if (shape < 1) q.singular_exponent = shape - 1.0;
  auto integrand = [&](double y) { return mathkit::gamma_pdf(y, shape, scale) * F(margin - y); };
  // Gamma mass beyond the cut is below 1e-16, and F <= 1 there.
  const double cut = std::min(margin, scale * boost::math::gamma_q_inv(shape, 1e-16));
  return detail::clamp_probability(mathkit::integrate(integrand, 0.0, cut, ctx.options().convolution_tol, q));
}

enum class CoveragePath { bell, large_k, degenerate };

inline const char* to_string(CoveragePath p) {
  switch (p) {
    case CoveragePath::bell:
      return "bell";
    case CoveragePath::large_k:
      return "large-k";
    case CoveragePath::degenerate:
      return "degenerate";
  }
  return "?";
}

struct DistanceCoverage {
  double value = 0;
  double k = 0;  // matched shape of S0; infinite on the degenerate path
  CoveragePath path = CoveragePath::bell;
};

inline DistanceCoverage coverage_at_distance_detailed(double d00, const CoverageContext& ctx) {
  const AnalyticModel& m = ctx.model();
  if (m.rho_bs == 0) {
    // Constant signal L_A^2 and no BS interference.
    const double s0 = m.ap_signal * m.ap_signal;
    return {s0 > ctx.threshold() * ctx.interference_plus_noise() ? 1.0 : 0.0,
            std::numeric_limits<double>::infinity(), CoveragePath::degenerate};
  }
  const MatchedGamma sg = ctx.signal_gamma(d00);
  const double k = sg.k;
  if (k < ctx.options().k_switch) {
    const double lo = std::floor(k), hi = std::ceil(k);
    if (const auto p = detail::bell_partial_sums(static_cast<int>(hi), d00, ctx, sg)) {
      const double v = lo == hi ? (*p)[static_cast<int>(lo)]
                                : (hi - k) * (*p)[static_cast<int>(lo)] + (k - lo) * (*p)[static_cast<int>(hi)];
      return {detail::clamp_probability(v), k, CoveragePath::bell};
    }
  }
  return {coverage_large_k(d00, ctx), k, CoveragePath::large_k};
}

inline double coverage_at_distance(double d00, const CoverageContext& ctx) {
  return coverage_at_distance_detailed(d00, ctx).value;
}

struct CoverageReport {
  double value = 0;
  double k_min = std::numeric_limits<double>::infinity();
  double k_max = -std::numeric_limits<double>::infinity();
  int bell_nodes = 0;
  int large_k_nodes = 0;
  int degenerate_nodes = 0;

  /// "bell", "large-k", "degenerate" or a '+'-joined mix.
  std::string path() const {
    std::string out;
    auto add = [&](int n, const char* name) {
      if (n == 0) return;
      if (!out.empty()) out += '+';
      out += name;
    };
    add(bell_nodes, "bell");
    add(large_k_nodes, "large-k");
    add(degenerate_nodes, "degenerate");
    return out.empty() ? "none" : out;
  }
};

// Nodes whose quadrature weight times pdf is below this cannot move the
// average by more than the weight itself.
inline constexpr double kNegligibleNodeWeight = 1e-12;

/// Average coverage over the nearest-BS distance on [0, R].
inline CoverageReport coverage_report(const CoverageContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const mathkit::GaussRule rule = mathkit::gauss_legendre(kDistanceNodes, 0.0, m.radius);
  const std::size_t n = rule.nodes.size();
  std::vector<double> contrib(n, 0.0);
  std::vector<std::optional<DistanceCoverage>> detail(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        const double w = rule.weights[i] * nearest_bs_pdf(rule.nodes[i], m);
        if (w < kNegligibleNodeWeight) return;
        detail[i] = coverage_at_distance_detailed(rule.nodes[i], ctx);
        contrib[i] = w * detail[i]->value;
      },
      ctx.options().threads);
  CoverageReport r;
  r.value = detail::clamp_probability(pairwise_sum(contrib));
  for (const auto& d : detail) {
    if (!d) continue;
    switch (d->path) {
      case CoveragePath::bell:
        ++r.bell_nodes;
        break;
      case CoveragePath::large_k:
        ++r.large_k_nodes;
        break;
      case CoveragePath::degenerate:
        ++r.degenerate_nodes;
        continue;
    }
    r.k_min = std::min(r.k_min, d->k);
    r.k_max = std::max(r.k_max, d->k);
  }
  return r;
}

inline double coverage(const CoverageContext& ctx) { return coverage_report(ctx).value; }

/// Convenience: coverage of a parameter set at a linear threshold.
inline double coverage(const NetworkParams& p, double threshold, CoverageOptions opt = {}) {
  return coverage(CoverageContext(analytic_model(p), threshold, opt));
}

}  // namespace hccn
