#pragma once

// Monte Carlo estimators. Trials run in parallel; every trial owns its random
// stream and its output slot, and reductions run in index order, so results
// are bit-identical for any worker count.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hccn/errors.hpp"
#include "hccn/mcsim/channel.hpp"
#include "hccn/mcsim/deployment.hpp"
#include "hccn/mcsim/rng.hpp"
#include "hccn/parallel.hpp"
#include "hccn/params.hpp"

namespace hccn::mcsim {

struct Estimate {
  double mean = 0;
  double ci_half_width = 0;  // 95%, normal approximation
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Sample mean and 1.96 * sample std / sqrt(n).
inline Estimate make_estimate(const std::vector<double>& x, std::uint64_t seed) {
  Estimate e;
  e.trials = x.size();
  e.seed = seed;
  if (x.empty()) return e;
  const double n = static_cast<double>(x.size());
  e.mean = pairwise_sum(x) / n;
  if (x.size() > 1) {
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - e.mean) * (x[i] - e.mean);
    e.ci_half_width = 1.96 * std::sqrt(pairwise_sum(dev) / (n - 1.0)) / std::sqrt(n);
  }
  return e;
}

struct McOptions {
  int threads = 0;                    // 0 = default worker count
  double ap_exclusion_radius = 0;     // APs closer than this to the typical UE are removed
  std::optional<std::pair<double, double>> serving_band;  // accept only d00 in [lo, hi]
  int max_attempts = 1000000;         // per trial
};

struct SinrBatch {
  std::vector<SinrSample> samples;
  std::uint64_t resampled = 0;  // deployments redrawn for lack of a serving BS
  std::uint64_t rejected = 0;   // deployments redrawn for a serving distance outside the band
  std::uint64_t seed = 0;
};

namespace detail {

inline void exclude_aps(Deployment& dep, double radius) {
  if (!(radius > 0)) return;
  std::vector<Point> kept;
  for (const Point& a : dep.ap)
    if (!(a.norm() < radius)) kept.push_back(a);
  dep.ap = std::move(kept);
}

struct TrialDeployment {
  Deployment dep;
  Engine eng;
  std::uint64_t resampled = 0;
  std::uint64_t rejected = 0;
};

inline TrialDeployment accepted_deployment(const NetworkParams& p, const DerivedParams& d, std::uint64_t seed,
                                           std::uint64_t trial, const McOptions& opt, bool need_bs) {
  TrialDeployment t{{}, Engine{}, 0, 0};
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    t.eng = trial_engine(seed, trial, static_cast<std::uint64_t>(attempt));
    t.dep = sample_deployment(p, d, t.eng);
    exclude_aps(t.dep, opt.ap_exclusion_radius);
    if (need_bs && !t.dep.has_serving_bs()) {
      ++t.resampled;
      continue;
    }
    if (opt.serving_band) {
      const double r = t.dep.serving_distance();
      if (r < opt.serving_band->first || r > opt.serving_band->second) {
        ++t.rejected;
        continue;
      }
    }
    return t;
  }
  throw NumericError("mcsim", "no acceptable deployment within the attempt budget");
}

}  // namespace detail

/// One SINR sample per trial.
inline SinrBatch simulate(const NetworkParams& p, std::uint64_t trials, std::uint64_t seed, const McOptions& opt = {}) {
  const DerivedParams d = derive(p);
  SinrBatch batch;
  batch.seed = seed;
  batch.samples.resize(trials);
  std::vector<std::uint64_t> resampled(trials, 0), rejected(trials, 0);
  parallel_for(
      trials,
      [&](std::size_t i) {
        detail::TrialDeployment t = detail::accepted_deployment(p, d, seed, i, opt, true);
        batch.samples[i] = realize_sinr(t.dep, p, d, t.eng);
        resampled[i] = t.resampled;
        rejected[i] = t.rejected;
      },
      opt.threads);
  for (std::size_t i = 0; i < trials; ++i) {
    batch.resampled += resampled[i];
    batch.rejected += rejected[i];
  }
  return batch;
}

struct CoverageEstimate {
  Estimate approx;  // SINR with the decomposed interference
  Estimate exact;   // SINR with the coherent interference
  std::uint64_t resampled = 0;
};

inline CoverageEstimate coverage_from(const SinrBatch& b, double threshold) {
  std::vector<double> a(b.samples.size()), e(b.samples.size());
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    a[i] = b.samples[i].sinr_approx > threshold ? 1.0 : 0.0;
    e[i] = b.samples[i].sinr_exact > threshold ? 1.0 : 0.0;
  }
  return {make_estimate(a, b.seed), make_estimate(e, b.seed), b.resampled};
}

inline CoverageEstimate estimate_coverage(const NetworkParams& p, double threshold, std::uint64_t trials,
                                          std::uint64_t seed, const McOptions& opt = {}) {
  return coverage_from(simulate(p, trials, seed, opt), threshold);
}

/// Coverage at several thresholds from one set of samples.
inline std::vector<CoverageEstimate> estimate_coverage(const NetworkParams& p, std::span<const double> thresholds,
                                                       std::uint64_t trials, std::uint64_t seed,
                                                       const McOptions& opt = {}) {
  const SinrBatch b = simulate(p, trials, seed, opt);
  std::vector<CoverageEstimate> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back(coverage_from(b, t));
  return out;
}

struct RateEstimate {
  Estimate approx;
  Estimate exact;
  std::uint64_t resampled = 0;
};

inline RateEstimate rate_from(const SinrBatch& b) {
  std::vector<double> a(b.samples.size()), e(b.samples.size());
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    a[i] = std::log1p(b.samples[i].sinr_approx);
    e[i] = std::log1p(b.samples[i].sinr_exact);
  }
  return {make_estimate(a, b.seed), make_estimate(e, b.seed), b.resampled};
}

/// Mean rate in nats/s/Hz.
inline RateEstimate estimate_rate(const NetworkParams& p, std::uint64_t trials, std::uint64_t seed,
                                  const McOptions& opt = {}) {
  return rate_from(simulate(p, trials, seed, opt));
}

struct ApTermsEstimate {
  Estimate signal;        // sqrt(rho_A) * sum_j ||g_j0||
  Estimate interference;  // AP interference power
};

/// AP-side terms only; deployments without a BS are kept.
inline ApTermsEstimate estimate_ap_terms(const NetworkParams& p, std::uint64_t trials, std::uint64_t seed,
                                         const McOptions& opt = {}) {
  const DerivedParams d = derive(p);
  std::vector<double> sig(trials), intf(trials);
  const double sa = std::sqrt(d.rho_ap);
  parallel_for(
      trials,
      [&](std::size_t i) {
        detail::TrialDeployment t = detail::accepted_deployment(p, d, seed, i, opt, false);
        const ChannelDraw c = draw_channels(t.dep, p, d, t.eng, false);
        double s = 0, ia = 0;
        for (std::size_t j = 0; j < t.dep.ap.size(); ++j) {
          s += std::sqrt(detail::norm2(c.g(j, 0), c.ap_antennas));
          for (std::size_t n = 1; n < c.ues; ++n)
            ia += std::norm(detail::project(c.g(j, 0), c.g(j, n), c.ap_antennas));
        }
        sig[i] = sa * s;
        intf[i] = d.rho_ap * ia;
      },
      opt.threads);
  return {make_estimate(sig, seed), make_estimate(intf, seed)};
}

}  // namespace hccn::mcsim
