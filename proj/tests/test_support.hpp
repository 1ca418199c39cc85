#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>

#include "hypercycle/model.hpp"

namespace hypercycle::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611u);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// Uniform point in the open simplex (flat Dirichlet).
inline Vec4 random_interior() {
  std::exponential_distribution<double> e(1.0);
  Vec4 x{};
  double s = 0.0;
  for (double& v : x) {
    v = e(rng()) + 1e-9;
    s += v;
  }
  for (double& v : x) v /= s;
  return x;
}

/// k2..k4 uniform in (0.2, 3); k1 uniform in (k1_lo, k1_hi), clipped to stay above k1*.
inline Params random_params(double k1_lo, double k1_hi) {
  const Vec4 k{0.0, uniform(0.2, 3.0), uniform(0.2, 3.0), uniform(0.2, 3.0)};
  const double k1_star = -1.0 / (1.0 / k[1] + 1.0 / k[2] + 1.0 / k[3]);
  const double lo = std::max(k1_lo, 0.9 * k1_star);
  return Params({uniform(lo, std::max(lo, k1_hi)), k[1], k[2], k[3]});
}

}  // namespace hypercycle::testing
