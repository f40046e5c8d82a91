#pragma once

// Explicit antenna channels and the SINR of the typical UE under conjugate
// beamforming from its serving BS and from every AP.

#include <cmath>
#include <complex>
#include <vector>

#include "hccn/errors.hpp"
#include "hccn/mcsim/deployment.hpp"
#include "hccn/mcsim/rng.hpp"
#include "hccn/params.hpp"

namespace hccn::mcsim {

using cplx = std::complex<double>;

/// Channel vectors including the large-scale gain: h = sqrt(beta) * zeta.
/// BS vectors are drawn only for the pairs the SINR needs (every BS to the
/// typical UE and every BS to the UEs it serves); the others stay zero.
struct ChannelDraw {
  int bs_antennas = 0;
  int ap_antennas = 0;
  std::size_t ues = 0;
  std::vector<cplx> bs;
  std::vector<cplx> ap;
  std::vector<char> bs_drawn;

  const cplx* h(std::size_t m, std::size_t i) const { return &bs[(m * ues + i) * bs_antennas]; }
  const cplx* g(std::size_t j, std::size_t i) const { return &ap[(j * ues + i) * ap_antennas]; }
  bool has_h(std::size_t m, std::size_t i) const { return bs_drawn[m * ues + i] != 0; }
};

/// With `with_bs` false only the AP vectors are drawn.
inline ChannelDraw draw_channels(const Deployment& dep, const NetworkParams& p, const DerivedParams& d, Engine& eng,
                                 bool with_bs = true) {
  ChannelDraw c;
  c.bs_antennas = p.antennas_bs;
  c.ap_antennas = p.antennas_ap;
  c.ues = dep.ue.size();
  c.bs.assign(dep.bs.size() * c.ues * c.bs_antennas, cplx{});
  c.bs_drawn.assign(dep.bs.size() * c.ues, 0);
  for (std::size_t m = 0; with_bs && m < dep.bs.size(); ++m) {
    for (std::size_t i = 0; i < c.ues; ++i) {
      if (i != 0 && dep.serving[i] != static_cast<int>(m)) continue;
      const double amp = std::sqrt(d.beta0 * std::pow(distance(dep.bs[m], dep.ue[i]), -p.alpha_bs));
      cplx* v = &c.bs[(m * c.ues + i) * c.bs_antennas];
      for (int k = 0; k < c.bs_antennas; ++k) v[k] = amp * complex_normal(eng);
      c.bs_drawn[m * c.ues + i] = 1;
    }
  }
  c.ap.resize(dep.ap.size() * c.ues * c.ap_antennas);
  for (std::size_t j = 0; j < dep.ap.size(); ++j) {
    for (std::size_t i = 0; i < c.ues; ++i) {
      const double amp = std::sqrt(d.delta0 * std::pow(distance(dep.ap[j], dep.ue[i]), -p.alpha_ap));
      cplx* v = &c.ap[(j * c.ues + i) * c.ap_antennas];
      for (int k = 0; k < c.ap_antennas; ++k) v[k] = amp * complex_normal(eng);
    }
  }
  return c;
}

namespace detail {
inline double norm2(const cplx* v, int n) {
  double s = 0;
  for (int k = 0; k < n; ++k) s += std::norm(v[k]);
  return s;
}
// a^H b / ||b||: the channel a seen through the conjugate beam aimed along b.
inline cplx project(const cplx* a, const cplx* b, int n) {
  cplx s{};
  for (int k = 0; k < n; ++k) s += std::conj(a[k]) * b[k];
  return s / std::sqrt(norm2(b, n));
}
}  // namespace detail

struct SinrSample {
  double s0 = 0;       // desired power, W
  double i_b0 = 0;     // intra-cell BS interference
  double i_b = 0;      // inter-cell BS interference
  double i_a = 0;      // AP interference
  double i_exact = 0;  // coherent per-UE interference
  double noise = 0;
  double sinr_approx = 0;
  double sinr_exact = 0;
  double serving_distance = 0;  // m
  double ap_amplitude = 0;      // sqrt(rho_A) * sum_j ||g_j0||
};

/// SINR of the typical UE for one channel draw. Powers are expectations over
/// unit-variance data symbols given the channels.
inline SinrSample realize_sinr(const Deployment& dep, const ChannelDraw& c, const NetworkParams& /*p*/,
                               const DerivedParams& d) {
  if (!dep.has_serving_bs()) throw NoServingBsError();
  const std::size_t serving = static_cast<std::size_t>(dep.typical_serving());
  const int nb = c.bs_antennas, na = c.ap_antennas;
  const double sb = std::sqrt(d.rho_bs), sa = std::sqrt(d.rho_ap);

  SinrSample out;
  out.serving_distance = dep.serving_distance();
  for (std::size_t j = 0; j < dep.ap.size(); ++j) out.ap_amplitude += std::sqrt(detail::norm2(c.g(j, 0), na));
  out.ap_amplitude *= sa;
  const double bs_amplitude = sb * std::sqrt(detail::norm2(c.h(serving, 0), nb));
  out.s0 = (bs_amplitude + out.ap_amplitude) * (bs_amplitude + out.ap_amplitude);

  for (std::size_t n = 1; n < c.ues; ++n) {
    const std::size_t m = static_cast<std::size_t>(dep.serving[n]);
    const cplx bs_amp = sb * detail::project(c.h(m, 0), c.h(m, n), nb);
    const double bs_pow = std::norm(bs_amp);
    (m == serving ? out.i_b0 : out.i_b) += bs_pow;
    cplx amp = bs_amp;
    for (std::size_t j = 0; j < dep.ap.size(); ++j) {
      const cplx a = sa * detail::project(c.g(j, 0), c.g(j, n), na);
      out.i_a += std::norm(a);
      amp += a;
    }
    out.i_exact += std::norm(amp);
  }
  out.noise = d.noise_power;
  out.sinr_approx = out.s0 / (out.i_b0 + out.i_b + out.i_a + out.noise);
  out.sinr_exact = out.s0 / (out.i_exact + out.noise);
  return out;
}

inline SinrSample realize_sinr(const Deployment& dep, const NetworkParams& p, const DerivedParams& d, Engine& eng) {
  if (!dep.has_serving_bs()) throw NoServingBsError();
  return realize_sinr(dep, draw_channels(dep, p, d, eng), p, d);
}

}  // namespace hccn::mcsim
