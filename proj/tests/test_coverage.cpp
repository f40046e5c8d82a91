#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "hccn/coverage.hpp"
#include "hccn/mcsim/deployment.hpp"
#include "oracles.hpp"

using namespace hccn;

namespace {

AnalyticModel reference_model() { return analytic_model(reference_params()); }

CoverageContext reference_context(double t_db = 5) { return CoverageContext(reference_model(), db_to_linear(t_db)); }

// g(s) for complex s, assembled from the same pieces as g_value.
std::complex<double> g_complex(std::complex<double> s, double d00, const CoverageContext& ctx) {
  const AnalyticModel& m = ctx.model();
  const MatchedGamma sg = ctx.signal_gamma(d00);
  const double tt = ctx.t_theta(sg);
  return -s * ctx.threshold() * ctx.interference_plus_noise() / sg.theta +
         (1.0 - m.mean_ues_per_bs) * std::log(1.0 + s * tt * std::pow(d00, -m.alpha_bs)) +
         intercell_log_laplace<std::complex<double>>(s * tt, d00, m);
}

// n-th derivative at s = 1 by the Cauchy integral on a circle of radius 1/2.
double cauchy_derivative(int n, double d00, const CoverageContext& ctx) {
  const int nodes = 64;
  const double radius = 0.5;
  double acc = 0;
  for (int j = 0; j < nodes; ++j) {
    const std::complex<double> w = std::polar(1.0, 2 * std::numbers::pi * j / nodes);
    acc += std::real(g_complex(1.0 + radius * w, d00, ctx) * std::pow(w, -n));
  }
  return acc / nodes * std::tgamma(n + 1.0) / std::pow(radius, n);
}

}  // namespace

TEST(NearestBsPdf, Basics) {
  const AnalyticModel m = reference_model();
  EXPECT_EQ(nearest_bs_pdf(0, m), 0.0);
  EXPECT_THROW(nearest_bs_pdf(-1, m), std::domain_error);
  EXPECT_THROW(nearest_bs_pdf(m.radius * 1.01, m), std::domain_error);
  const double total = mathkit::integrate_rel([&](double r) { return nearest_bs_pdf(r, m); }, 0, m.radius, 1e-13, 0);
  EXPECT_NEAR(total, 1.0, 1e-10);
}

// Serving distances of sampled deployments against the density, chi-square
// over 20 equiprobable bins.
TEST(NearestBsPdf, MatchesSampledDeployments) {
  const NetworkParams p = reference_params();
  const DerivedParams d = derive(p);
  const double mass = -std::expm1(-p.lambda_bs * d.area);
  const int bins = 20, n = 20000;
  std::vector<double> edges;
  for (int b = 1; b < bins; ++b)
    edges.push_back(std::sqrt(-std::log1p(-mass * b / bins) / (p.lambda_bs * std::numbers::pi)));
  std::vector<int> counts(bins, 0);
  int drawn = 0;
  for (std::uint64_t t = 0; drawn < n; ++t) {
    mcsim::Engine eng = mcsim::trial_engine(77, t);
    const mcsim::Deployment dep = mcsim::sample_deployment(p, d, eng);
    if (!dep.has_serving_bs()) continue;
    const double r = dep.serving_distance();
    counts[std::upper_bound(edges.begin(), edges.end(), r) - edges.begin()]++;
    ++drawn;
  }
  double chi2 = 0;
  const double expected = double(n) / bins;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(bins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3) << "chi2=" << chi2;
}

TEST(LaplaceTerms, TrivialCases) {
  const CoverageContext ctx = reference_context();
  EXPECT_EQ(laplace_y_ib0(0, 100, ctx), 1.0);
  EXPECT_EQ(laplace_y_ib(0, 100, ctx), 1.0);
  EXPECT_EQ(laplace_y_ib(1, ctx.model().radius, ctx), 1.0);

  AnalyticModel single = reference_model();
  single.mean_ues_per_bs = 1;
  EXPECT_EQ(laplace_y_ib0(2, 100, CoverageContext(single, 3.0)), 1.0);

  for (double s : {0.1, 0.5, 1.0, 2.0}) {
    EXPECT_GT(laplace_y_ib(s, 60, ctx), 0.0);
    EXPECT_LT(laplace_y_ib(s, 60, ctx), 1.0);
  }
}

// The intra-cell term is modelled as independent beams sharing only the scale.
TEST(LaplaceTerms, MatchSampling) {
  const CoverageContext ctx = reference_context();
  const AnalyticModel& m = ctx.model();
  const double d00 = 80;
  const double scale = ctx.threshold() / ctx.signal_gamma(d00).theta;
  const int n = 100000;
  mcsim::Engine eng = mcsim::trial_engine(5, 0);
  std::vector<oracle::Draw> draws(n);
  for (auto& dr : draws) dr = oracle::draw(m, d00, eng);
  for (double s : {0.25, 1.0, 3.0}) {
    double e0 = 0, e1 = 0;
    for (const auto& dr : draws) {
      e0 += std::exp(-s * scale * dr.i_b0_indep);
      e1 += std::exp(-s * scale * dr.i_b);
    }
    EXPECT_NEAR(e0 / n, laplace_y_ib0(s, d00, ctx), 0.005) << "s=" << s;
    EXPECT_NEAR(e1 / n, laplace_y_ib(s, d00, ctx), 0.005) << "s=" << s;
  }
}

TEST(GDerivatives, ClosedFormWithoutIntercell) {
  AnalyticModel m = reference_model();
  m.include_intercell = false;
  const CoverageContext ctx(m, db_to_linear(3));
  const double d00 = 90;
  const MatchedGamma sg = ctx.signal_gamma(d00);
  const double a = ctx.threshold() * ctx.interference_plus_noise() / sg.theta;
  const double c = ctx.t_theta(sg) * std::pow(d00, -m.alpha_bs);
  const double phi = m.mean_ues_per_bs;
  const std::vector<double> g = g_derivatives(5, d00, ctx);
  EXPECT_NEAR(g[0] / (-a + (1 - phi) * c / (1 + c)), 1.0, 1e-13);
  for (int n = 2; n <= 5; ++n) {
    const double expect = (1 - phi) * ((n - 1) % 2 == 0 ? 1.0 : -1.0) * std::tgamma(n) * std::pow(c / (1 + c), n);
    EXPECT_NEAR(g[n - 1] / expect, 1.0, 1e-13) << "n=" << n;
  }
}

TEST(GDerivatives, VanishWithoutInterference) {
  AnalyticModel m = reference_model();
  m.mean_ues_per_bs = 1;
  m.lambda_bs = 0;
  m.ap_interference = 0;
  m.noise_power = 0;
  for (double v : g_derivatives(6, 100, CoverageContext(m, 2.0))) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(g_derivatives(0, 100, CoverageContext(m, 2.0)), std::domain_error);
}

TEST(GDerivatives, MatchCauchyIntegral) {
  const CoverageContext ctx = reference_context();
  for (double d00 : {40.0, 120.0}) {
    const std::vector<double> g = g_derivatives(6, d00, ctx);
    for (int n = 1; n <= 6; ++n)
      EXPECT_NEAR(g[n - 1] / cauchy_derivative(n, d00, ctx), 1.0, 1e-6) << "n=" << n << " d00=" << d00;
  }
}

TEST(GDerivatives, AlternatingSigns) {
  const CoverageContext ctx = reference_context(10);
  const std::vector<double> g = g_derivatives(12, 150, ctx);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(g[i] * (i % 2 == 0 ? -1.0 : 1.0), 0.0) << i;
}

TEST(BellExpansion, FirstTermIsExpG) {
  const CoverageContext ctx = reference_context();
  EXPECT_NEAR(coverage_at_distance_bell(100, ctx, 1), std::exp(g_value(1, 100, ctx)), 1e-15);
  EXPECT_EQ(coverage_at_distance_bell(100, ctx, 0), 0.0);
  EXPECT_THROW(coverage_at_distance_bell(100, ctx, -1), std::domain_error);
}

TEST(BellExpansion, VanishingThreshold) {
  const CoverageContext ctx(reference_model(), 1e-9);
  EXPECT_NEAR(coverage_at_distance(100, ctx), 1.0, 1e-6);
}

// Without APs the signal is exactly Gamma(N_B) and the expansion is exact.
TEST(BellExpansion, ExactForGammaSignal) {
  AnalyticModel m = reference_model();
  m.ap_signal = 0;
  for (double t_db : {-5.0, 5.0}) {
    const CoverageContext ctx(m, db_to_linear(t_db));
    for (double d00 : {40.0, 100.0}) {
      const DistanceCoverage c = coverage_at_distance_detailed(d00, ctx);
      EXPECT_NEAR(c.k, m.antennas_bs, 1e-9);
      EXPECT_NEAR(c.value, oracle::conditional_coverage(m, d00, ctx.threshold(), 40000, 11, true), 0.01)
          << "T_dB=" << t_db << " d00=" << d00;
    }
  }
}

TEST(BellExpansion, MatchesConditionedSampling) {
  const CoverageContext ctx = reference_context();
  const DistanceCoverage c = coverage_at_distance_detailed(60, ctx);
  ASSERT_EQ(c.path, CoveragePath::bell);
  EXPECT_NEAR(c.value, oracle::conditional_coverage(ctx.model(), 60, ctx.threshold(), 10000, 12, true), 0.03);
}

TEST(Interpolation, IntegerAndHalfShape) {
  AnalyticModel m = reference_model();
  m.ap_signal = 0;
  const CoverageContext ctx(m, db_to_linear(0));
  EXPECT_NEAR(coverage_at_distance(70, ctx), coverage_at_distance_bell(70, ctx, 8), 1e-14);

  m.antennas_bs = 2.5;
  const CoverageContext half(m, db_to_linear(0));
  const DistanceCoverage c = coverage_at_distance_detailed(70, half);
  ASSERT_NEAR(c.k, 2.5, 1e-12);
  const double mean = 0.5 * (coverage_at_distance_bell(70, half, 2) + coverage_at_distance_bell(70, half, 3));
  EXPECT_NEAR(c.value, mean, 1e-14);
}

TEST(LargeK, NonPositiveMargin) {
  AnalyticModel m = reference_model();
  m.noise_power = 1.0;  // swamps every signal
  EXPECT_EQ(coverage_large_k(100, CoverageContext(m, 1.0)), 0.0);
}

TEST(LargeK, IntraCellOnlyIsGammaCdf) {
  AnalyticModel m = reference_model();
  m.include_intercell = false;
  const CoverageContext ctx(m, db_to_linear(0));
  const double d00 = 150;
  const double margin = ctx.signal_gamma(d00).mean() / ctx.threshold() - ctx.interference_plus_noise();
  const double b00 = m.rho_bs * m.beta0 * std::pow(d00, -m.alpha_bs);
  EXPECT_NEAR(coverage_large_k(d00, ctx), mathkit::gamma_cdf(margin, m.mean_ues_per_bs - 1, b00), 1e-7);
}

// Convolution of the intra-cell Gamma with the inverted inter-cell CDF against
// a single inversion of the product transform.
TEST(LargeK, ConvolutionMatchesProductInversion) {
  NetworkParams p = reference_params();
  p.power_ap = dbm_to_watts(20);
  const AnalyticModel m = analytic_model(p);
  const CoverageContext ctx(m, db_to_linear(0));
  for (double d00 : {120.0, 200.0}) {
    const double margin = ctx.signal_gamma(d00).mean() / ctx.threshold() - ctx.interference_plus_noise();
    const double b00 = m.rho_bs * m.beta0 * std::pow(d00, -m.alpha_bs);
    const double scale = m.rho_bs * m.beta0;
    const auto F = mathkit::LaplaceFn::from_log([&](mathkit::cplx s) {
      return (1.0 - m.mean_ues_per_bs) * std::log(1.0 + s * b00) +
             intercell_log_laplace<mathkit::cplx>(s * scale, d00, m) - std::log(s);
    });
    EXPECT_NEAR(coverage_large_k(d00, ctx), mathkit::inverse_laplace_cdf(F, margin), 1e-4) << "d00=" << d00;
  }
}

TEST(LargeK, MatchesConditionedSampling) {
  NetworkParams p = reference_params();
  p.power_ap = dbm_to_watts(20);
  const CoverageContext ctx(analytic_model(p), db_to_linear(0));
  const DistanceCoverage c = coverage_at_distance_detailed(200, ctx);
  ASSERT_EQ(c.path, CoveragePath::large_k);
  EXPECT_NEAR(c.value, oracle::conditional_coverage(ctx.model(), 200, ctx.threshold(), 10000, 13, true), 0.03);
}

TEST(Coverage, ThresholdLimits) {
  const NetworkParams p = reference_params();
  EXPECT_NEAR(coverage(p, 1e-9), 1.0, 1e-4);
  EXPECT_LT(coverage(p, 1e12), 1e-6);
  EXPECT_THROW(coverage(p, 0.0), std::domain_error);
}

TEST(Coverage, NonIncreasingInThreshold) {
  const NetworkParams p = reference_params();
  double last = 1.0;
  for (int i = 0; i < 30; ++i) {
    const double t_db = -10 + i * (30.0 / 29);
    const double c = coverage(p, db_to_linear(t_db));
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, last + 1e-9) << "T_dB=" << t_db;
    last = c;
  }
}

TEST(Coverage, InvariantUnderPowerRescaling) {
  NetworkParams p = reference_params();
  const double base = coverage(p, db_to_linear(5));
  p.power_bs *= 10;
  p.power_ap *= 10;
  EXPECT_NEAR(coverage(p, db_to_linear(5)), base, 1e-6);
}

TEST(Coverage, CellularOnlyLimits) {
  NetworkParams no_power = reference_params();
  no_power.power_ap = 0;
  NetworkParams no_aps = reference_params();
  no_aps.lambda_ap = 0;
  const double a = coverage(no_power, db_to_linear(5));
  EXPECT_NEAR(a, coverage(no_aps, db_to_linear(5)), 1e-12);
  AnalyticModel m = reference_model();
  m.ap_signal = 0;
  m.ap_interference = 0;
  EXPECT_NEAR(a, coverage(CoverageContext(m, db_to_linear(5))), 1e-12);
}

TEST(Coverage, ReportBookkeeping) {
  const CoverageReport r = coverage_report(reference_context());
  EXPECT_LE(r.bell_nodes + r.large_k_nodes + r.degenerate_nodes, kDistanceNodes);
  EXPECT_GT(r.bell_nodes, 0);
  EXPECT_LE(r.k_min, r.k_max);
  EXPECT_GE(r.k_min, reference_params().antennas_bs);
}

TEST(Coverage, NoBsPowerIsDegenerate) {
  NetworkParams p = reference_params();
  p.power_bs = 0;
  const CoverageReport r = coverage_report(CoverageContext(analytic_model(p), db_to_linear(-30)));
  EXPECT_EQ(r.path(), "degenerate");
  // Every node covers, so only the probability of a BS in the disk remains.
  const AnalyticModel m = analytic_model(p);
  ASSERT_GT(m.ap_signal * m.ap_signal, db_to_linear(-30) * m.interference_plus_noise());
  EXPECT_NEAR(r.value, -std::expm1(-m.lambda_bs * std::numbers::pi * m.radius * m.radius), 1e-9);
}
