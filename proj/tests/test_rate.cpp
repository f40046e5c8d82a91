#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hccn/mathkit/special.hpp"
#include "hccn/rate.hpp"
#include "oracles.hpp"

using namespace hccn;

namespace {

AnalyticModel reference_model() { return analytic_model(reference_params()); }

// int_{d00}^{R} [(1 + K r^-alpha)^-phi - 1] r dr through the antiderivative
// (r^2 / 2) 2F1(phi, -2/alpha; 1 - 2/alpha; -K r^-alpha).
double intercell_hypergeometric(double K, double d00, const AnalyticModel& m) {
  const double delta = 2.0 / m.alpha_bs;
  auto anti = [&](double r) {
    return 0.5 * r * r *
           (mathkit::gauss_2f1(m.mean_ues_per_bs, -delta, 1.0 - delta, -K * std::pow(r, -m.alpha_bs)) - 1.0);
  };
  return 2 * std::numbers::pi * m.lambda_bs * (anti(m.radius) - anti(d00));
}

}  // namespace

TEST(RateLaplace, TrivialCases) {
  const RateContext ctx(reference_model());
  EXPECT_EQ(laplace_ib(0, 100, ctx), 1.0);
  EXPECT_EQ(laplace_ib(1e9, ctx.model().radius, ctx), 1.0);
  EXPECT_EQ(laplace_ib0(0, 100, ctx), 1.0);
  EXPECT_NEAR(laplace_si(0, 100, ctx), 1.0, 1e-15);

  AnalyticModel single = reference_model();
  single.mean_ues_per_bs = 1;
  EXPECT_EQ(laplace_ib0(1e9, 100, RateContext(single)), 1.0);

  AnalyticModel no_bs = reference_model();
  no_bs.rho_bs = 0;
  const double la2 = no_bs.ap_signal * no_bs.ap_signal;
  EXPECT_NEAR(laplace_si(1 / la2, 100, RateContext(no_bs)), std::exp(-1.0), 1e-15);
}

TEST(RateLaplace, IntercellExponentMatchesHypergeometric) {
  const AnalyticModel m = reference_model();
  mcsim::Engine eng = mcsim::trial_engine(404, 0);
  for (int i = 0; i < 20; ++i) {
    const double d00 = 20 + 380 * mcsim::uniform(eng);
    const double z = std::exp(std::log(1e-3) + std::log(2e4) * mcsim::uniform(eng));  // K d00^-alpha
    const double K = z * std::pow(d00, m.alpha_bs);
    const double quad = intercell_log_laplace(K, d00, m);
    EXPECT_NEAR(quad / intercell_hypergeometric(K, d00, m), 1.0, 1e-6) << "d00=" << d00 << " z=" << z;
  }
}

TEST(RateLaplace, MatchSampling) {
  const RateContext ctx(reference_model());
  const AnalyticModel& m = ctx.model();
  const double d00 = 90, b00 = m.rho_bs * m.beta0 * std::pow(d00, -m.alpha_bs);
  const int n = 100000;
  mcsim::Engine eng = mcsim::trial_engine(6, 0);
  std::vector<oracle::Draw> draws(n);
  for (auto& dr : draws) dr = oracle::draw(m, d00, eng);
  for (double x : {0.3, 1.0, 3.0}) {
    const double s = x / b00;
    double ib = 0, ib0 = 0, si = 0;
    for (const auto& dr : draws) {
      ib += std::exp(-s * dr.i_b);
      ib0 += std::exp(-s * dr.i_b0_indep);
      si += std::exp(-s * (dr.s0 + dr.i_b0_indep));
    }
    EXPECT_NEAR(ib / n, laplace_ib(s, d00, ctx), 0.005) << "s b00=" << x;
    EXPECT_NEAR(ib0 / n, laplace_ib0(s, d00, ctx), 0.005) << "s b00=" << x;
    // Matched-Gamma approximation of S0 + I_B0, so a looser band.
    EXPECT_NEAR(si / n, laplace_si(s, d00, ctx), 0.01) << "s b00=" << x;
  }
}

// With one UE per cell and no APs, S0 + I_B0 = S0 is exactly Gamma(N_B).
TEST(RateAtDistance, ExactWhenSignalIsGamma) {
  AnalyticModel m = reference_model();
  m.ap_signal = 0;
  m.mean_ues_per_bs = 1;
  const RateContext ctx(m);
  for (double d00 : {50.0, 150.0}) {
    const double mc = oracle::conditional_rate(m, d00, 100000, 21, true);
    EXPECT_NEAR(rate_at_distance(d00, ctx) / mc, 1.0, 0.01) << "d00=" << d00;
  }
}

TEST(RateAtDistance, MatchesConditionedSampling) {
  const RateContext ctx(reference_model());
  for (double d00 : {60.0, 140.0}) {
    const double mc = oracle::conditional_rate(ctx.model(), d00, 40000, 22, true);
    EXPECT_NEAR(rate_at_distance(d00, ctx) / mc, 1.0, 0.03) << "d00=" << d00;
  }
}

TEST(RateAtDistance, Limits) {
  AnalyticModel m = reference_model();
  m.rho_bs = 0;
  m.ap_signal = 0;
  EXPECT_EQ(rate_at_distance(100, RateContext(m)), 0.0);

  m = reference_model();
  m.noise_power = 1e3;
  EXPECT_LT(rate_at_distance(100, RateContext(m)), 1e-6);

  m = reference_model();
  m.ap_interference = 0;
  m.noise_power = 0;
  EXPECT_THROW(rate_at_distance(100, RateContext(m)), NumericError);
}

// Without BS power the rate is log(1 + L_A^2 / I_e) at every distance.
TEST(RateAtDistance, ApOnlyIsDeterministic) {
  AnalyticModel m = reference_model();
  m.rho_bs = 0;
  const double expect = std::log1p(m.ap_signal * m.ap_signal / m.interference_plus_noise());
  EXPECT_NEAR(rate_at_distance(100, RateContext(m)) / expect, 1.0, 1e-7);
}

TEST(RateAtDistance, DecreasesWithDistance) {
  const RateContext ctx(reference_model());
  double last = INFINITY;
  for (double d00 : {10.0, 40.0, 100.0, 200.0, 400.0}) {
    const double r = rate_at_distance(d00, ctx);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, last) << "d00=" << d00;
    last = r;
  }
}

TEST(Rate, DecreasesWithNoiseAndLoad) {
  NetworkParams p = reference_params();
  const double base = rate(p);
  NetworkParams noisy = p;
  noisy.snr_ref_db = 100;
  EXPECT_LT(rate(noisy), base);
  NetworkParams loaded = p;
  loaded.lambda_ue *= 2;
  EXPECT_LT(rate(loaded), base);
}

TEST(Rate, InvariantUnderPowerRescaling) {
  NetworkParams p = reference_params();
  const double base = rate(p);
  p.power_bs *= 10;
  p.power_ap *= 10;
  EXPECT_NEAR(rate(p) / base, 1.0, 1e-7);
}

TEST(Rate, ReportShapesCoverSignalOrder) {
  const RateReport r = rate_report(RateContext(reference_model()));
  EXPECT_GT(r.value, 0.0);
  EXPECT_GE(r.k_min, reference_params().antennas_bs);
  EXPECT_LE(r.k_min, r.k_max);
}
