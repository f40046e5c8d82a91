#pragma once

// Per-trial random streams. Each (master seed, trial, attempt) triple seeds its
// own Mersenne Twister through std::seed_seq, so a trial's draws do not depend
// on which worker runs it or in which order. Distributions come from
// Boost.Random, whose algorithms are fixed across standard libraries.

#include <atomic>
#include <complex>
#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace hccn::mcsim {

using Engine = std::mt19937_64;

namespace detail {
inline std::atomic<std::uint64_t> streams_created{0};
}

/// Number of random streams opened since program start. Lets callers check
/// that a code path consumed no randomness.
inline std::uint64_t rng_streams_created() { return detail::streams_created.load(); }

/// Independent stream for one trial. `purpose` separates unrelated uses of the
/// same trial index (e.g. resampling attempts).
inline Engine trial_engine(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose = 0) {
  detail::streams_created.fetch_add(1, std::memory_order_relaxed);
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(trial), hi(trial), lo(purpose), hi(purpose)};
  return Engine(seq);
}

inline double uniform(Engine& eng) { return boost::random::uniform_01<double>()(eng); }

inline double normal(Engine& eng) { return boost::random::normal_distribution<double>()(eng); }

inline int poisson(Engine& eng, double mean) {
  if (!(mean > 0)) return 0;
  return boost::random::poisson_distribution<int, double>(mean)(eng);
}

/// Circularly symmetric complex Gaussian with unit variance.
inline std::complex<double> complex_normal(Engine& eng) {
  constexpr double s = 0.70710678118654752440;
  const double re = normal(eng);
  const double im = normal(eng);
  return {s * re, s * im};
}

}  // namespace hccn::mcsim
