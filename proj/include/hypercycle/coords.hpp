#pragma once

// Coordinate chain that pins the interior fixed point at the origin:
//
//   x in S4  --(y_i ~ k_{i+1} x_i)-->  barycentric y  --(z = y - 1/4)-->  centered z
//
// followed by elimination of z2 = -z1 - z3 - z4. The reduced state keeps
// (z1, z3, z4) in that order. The barycentric weights involve k1, so the
// change is singular at k1 = 0.

#include <array>
#include <cmath>
#include <limits>

#include "hypercycle/errors.hpp"
#include "hypercycle/jets.hpp"
#include "hypercycle/model.hpp"

namespace hypercycle {

struct BarycentricPoint {
  explicit BarycentricPoint(Vec4 y, double tol = kDefaultTol) : y(y) {
    double s = 0.0;
    for (double v : y) {
      if (!std::isfinite(v)) throw DomainError("barycentric coordinate is not finite");
      s += v;
    }
    if (std::abs(s - 1.0) > tol) throw DomainError("barycentric coordinates do not sum to 1");
  }
  Vec4 y;
};

/// (z1, z3, z4); z2 is implied by the zero-sum constraint.
struct ReducedState {
  std::array<double, 3> z{0.0, 0.0, 0.0};

  double z2() const { return -z[0] - z[1] - z[2]; }
  double norm() const { return std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]); }

  friend ReducedState operator+(const ReducedState& a, const ReducedState& b) {
    return {{a.z[0] + b.z[0], a.z[1] + b.z[1], a.z[2] + b.z[2]}};
  }
  friend ReducedState operator-(const ReducedState& a, const ReducedState& b) {
    return {{a.z[0] - b.z[0], a.z[1] - b.z[1], a.z[2] - b.z[2]}};
  }
  friend ReducedState operator*(double s, const ReducedState& a) { return {{s * a.z[0], s * a.z[1], s * a.z[2]}}; }
};

namespace detail {
// sum is zero up to rounding of its terms
inline bool cancels(double sum, double scale) { return !std::isfinite(sum) || std::abs(sum) <= 1e-14 * scale; }
}  // namespace detail

inline BarycentricPoint to_barycentric(const SimplexPoint& xp, const Params& p) {
  if (p.k1() == 0.0) throw SingularTransform("barycentric change is singular at k1 = 0");
  const Vec4& x = xp.coords();
  double total = 0.0;
  double scale = 0.0;
  Vec4 w{};
  for (std::size_t i = 0; i < kSpecies; ++i) {
    w[i] = p[next(i)] * x[i];
    total += w[i];
    scale += std::abs(w[i]);
  }
  if (detail::cancels(total, scale)) throw DegenerateDenominator("sum_j k_{j+1} x_j vanishes");
  for (double& v : w) v /= total;
  return BarycentricPoint(w, 1e-12);
}

inline SimplexPoint from_barycentric(const BarycentricPoint& bp, const Params& p) {
  if (p.k1() == 0.0) throw SingularTransform("barycentric change is singular at k1 = 0");
  double n = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < kSpecies; ++j) {
    n += bp.y[j] / p[next(j)];
    scale += std::abs(bp.y[j] / p[next(j)]);
  }
  if (detail::cancels(n, scale)) throw DegenerateDenominator("N(y) vanishes");
  Vec4 x{};
  for (std::size_t i = 0; i < kSpecies; ++i) x[i] = bp.y[i] / (n * p[next(i)]);
  return SimplexPoint(x);
}

inline ReducedState center_and_reduce(const BarycentricPoint& bp) {
  return {{bp.y[0] - 0.25, bp.y[2] - 0.25, bp.y[3] - 0.25}};
}

/// Centered 4-d coordinates (z1, z2, z3, z4).
inline Vec4 embed(const ReducedState& r) { return {r.z[0], r.z2(), r.z[1], r.z[2]}; }

inline BarycentricPoint uncenter(const ReducedState& r) {
  const Vec4 c = embed(r);
  return BarycentricPoint({c[0] + 0.25, c[1] + 0.25, c[2] + 0.25, c[3] + 0.25});
}

/// The hypercycle map conjugated into reduced coordinates, evaluated through
/// the original coordinates.
inline ReducedState reduced_map(const ReducedState& r, const Params& p) {
  const SimplexPoint x = from_barycentric(uncenter(r), p);
  return center_and_reduce(to_barycentric(map_step(x, p), p));
}

/// Same map from the algebraic expression in centered coordinates:
///   F_i(z) = z_i + (z_{i-1} - S(z)) (z_i + 1/4) / W(z),
///   S(z) = sum_j z_j z_{j-1},   W(z) = (1 + M1)/4 + sum_j z_j / k_{j+1} + S(z).
/// Generic in the scalar so it can be differentiated automatically.
template <typename T>
std::array<T, 3> reduced_map_closed_form(const std::array<T, 3>& r, const Params& p) {
  if (p.k1() == 0.0) throw SingularTransform("reduced map is singular at k1 = 0");
  const std::array<T, 4> z{r[0], -r[0] - r[1] - r[2], r[1], r[2]};
  T s = z[0] * z[3];
  for (std::size_t j = 1; j < kSpecies; ++j) s += z[j] * z[j - 1];
  T w = s + 0.25 * (1.0 + *p.m1());
  for (std::size_t j = 0; j < kSpecies; ++j) w += z[j] / p[next(j)];
  std::array<T, 4> f;
  for (std::size_t i = 0; i < kSpecies; ++i) f[i] = z[i] + (z[prev(i)] - s) * (z[i] + 0.25) / w;
  return {f[0], f[2], f[3]};
}

inline ReducedState reduced_map_closed_form(const ReducedState& r, const Params& p) {
  return {reduced_map_closed_form<double>(r.z, p)};
}

/// Leading-order field g of G(z) = z + delta g(z) + O(delta^2 |z|^2), in closed
/// rational form. Components follow (z1, z3, z4).
inline std::array<double, 3> g_exact(const ReducedState& r) {
  const double z1 = r.z[0];
  const double z3 = r.z[1];
  const double z4 = r.z[2];
  const double den = 1.0 + 4.0 * z4;
  if (std::abs(den) < std::numeric_limits<double>::epsilon()) throw PoleError("g has a pole at z4 = -1/4");
  const double u2 = (z1 + z3) * (z1 + z3);
  return {(1.0 + 4.0 * z1) * (z4 + u2) / den, (1.0 + 4.0 * z3) * (-z1 - z3 - z4 + u2) / den, z3 + u2};
}

inline const Labels& reduced_labels() {
  static const Labels l{"z1", "z3", "z4"};
  return l;
}

/// Taylor jet of g at the origin, exact. Built from the centered form
///   g_i = (z_{i-1} - S(z)) (1 + 4 z_i) / (1 + 4 z4)
/// with z2 substituted, so that it is independent of the closed form above.
inline JetMap3 g_jet(int degree = 3) {
  const Labels& l = reduced_labels();
  const Jet3 z1 = Jet3::variable(0, degree, l);
  const Jet3 z3 = Jet3::variable(1, degree, l);
  const Jet3 z4 = Jet3::variable(2, degree, l);
  const Jet3 z2 = -(z1 + z3 + z4);
  const std::array<Jet3, 4> z{z1, z2, z3, z4};
  const Jet3 one = Jet3::constant(ExactComplex(1), degree, l);
  Jet3 s = z[0] * z[3];
  for (std::size_t j = 1; j < kSpecies; ++j) s += z[j] * z[j - 1];
  const Jet3 inv = jet_reciprocal(one + z4 * ExactComplex(4));
  auto component = [&](std::size_t i) { return (z[prev(i)] - s) * (one + z[i] * ExactComplex(4)) * inv; };
  return {component(0), component(2), component(3)};
}

}  // namespace hypercycle
