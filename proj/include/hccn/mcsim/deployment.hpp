#pragma once

// Poisson deployments of BSs, APs and UEs on the disk of radius R, with the
// typical UE at the origin.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "hccn/mcsim/rng.hpp"
#include "hccn/params.hpp"

namespace hccn::mcsim {

struct Point {
  double x = 0;
  double y = 0;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Deployment {
  std::vector<Point> bs;
  std::vector<Point> ap;
  std::vector<Point> ue;      // ue[0] is the typical UE at the origin
  std::vector<int> serving;   // nearest BS per UE, -1 when there is no BS

  bool has_serving_bs() const { return !bs.empty(); }
  int typical_serving() const { return serving.empty() ? -1 : serving[0]; }
  double serving_distance() const {
    const int s = typical_serving();
    return s < 0 ? std::numeric_limits<double>::infinity() : bs[s].norm();
  }
};

inline Point uniform_in_disk(Engine& eng, double radius) {
  const double r = radius * std::sqrt(uniform(eng));
  const double t = 2.0 * std::numbers::pi * uniform(eng);
  return {r * std::cos(t), r * std::sin(t)};
}

/// Nearest BS to each UE; ties go to the lowest index.
inline std::vector<int> associate(const std::vector<Point>& bs, const std::vector<Point>& ue) {
  std::vector<int> out(ue.size(), -1);
  for (std::size_t i = 0; i < ue.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < bs.size(); ++m) {
      const double dx = bs[m].x - ue[i].x, dy = bs[m].y - ue[i].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        out[i] = static_cast<int>(m);
      }
    }
  }
  return out;
}

/// Draws one deployment. The UE count is Poisson(lambda_U * area) and includes
/// the typical UE, matching the (lambda_U * area - 1) other UEs assumed by the
/// AP interference mean.
inline Deployment sample_deployment(const NetworkParams& p, const DerivedParams& d, Engine& eng) {
  Deployment dep;
  const int n_bs = poisson(eng, p.lambda_bs * d.area);
  const int n_ap = poisson(eng, p.lambda_ap * d.area);
  const int n_ue = poisson(eng, p.lambda_ue * d.area);
  dep.bs.reserve(n_bs);
  for (int i = 0; i < n_bs; ++i) dep.bs.push_back(uniform_in_disk(eng, p.radius));
  dep.ap.reserve(n_ap);
  for (int i = 0; i < n_ap; ++i) dep.ap.push_back(uniform_in_disk(eng, p.radius));
  dep.ue.reserve(std::max(n_ue, 1));
  dep.ue.push_back({0.0, 0.0});
  for (int i = 1; i < n_ue; ++i) dep.ue.push_back(uniform_in_disk(eng, p.radius));
  dep.serving = associate(dep.bs, dep.ue);
  return dep;
}

inline Deployment sample_deployment(const NetworkParams& p, const DerivedParams& d, std::uint64_t seed) {
  Engine eng = trial_engine(seed, 0);
  return sample_deployment(p, d, eng);
}

}  // namespace hccn::mcsim
