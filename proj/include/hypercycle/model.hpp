#pragma once

// The discrete four-species hypercycle on the simplex S4 (C normalized to 1):
//
//   F_i(x) = (1 + k_i x_{i-1}) x_i / (1 + phi(x)),   phi(x) = sum_i k_i x_i x_{i-1},
//
// with cyclic indices (x_0 = x_4, k_5 = k_1). Indices are 0-based in code, so
// "i-1" is prev(i) and "k_{i+1}" is k[next(i)].

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypercycle/errors.hpp"

namespace hypercycle {

inline constexpr double kDefaultTol = 1e-12;
inline constexpr std::size_t kSpecies = 4;

using Vec4 = std::array<double, 4>;
using Mat4 = Eigen::Matrix4d;
using Complex = std::complex<double>;

constexpr std::size_t prev(std::size_t i) { return (i + kSpecies - 1) % kSpecies; }
constexpr std::size_t next(std::size_t i) { return (i + 1) % kSpecies; }

/// Rate coefficients k1..k4 and the constants derived from them.
///
/// k2, k3, k4 must be positive; k1 is the shifting coefficient and may be
/// zero or negative as long as k1 > k1* = -1/M2.
class Params {
 public:
  explicit Params(Vec4 k) : k_(k) {
    for (double v : k_) {
      if (!std::isfinite(v)) throw ParameterError("rate coefficients must be finite");
    }
    for (std::size_t i = 1; i < kSpecies; ++i) {
      if (!(k_[i] > 0.0)) throw ParameterError("k2, k3, k4 must be positive");
    }
    m2_ = 1.0 / k_[1] + 1.0 / k_[2] + 1.0 / k_[3];
    if (!(k_[0] > k1_star())) {
      std::ostringstream os;
      os << "k1 = " << k_[0] << " is not above k1* = " << k1_star();
      throw ParameterError(os.str());
    }
  }

  const Vec4& k() const noexcept { return k_; }
  double operator[](std::size_t i) const noexcept { return k_[i]; }
  double k1() const noexcept { return k_[0]; }

  /// Sum of 1/k_j; undefined at k1 = 0.
  std::optional<double> m1() const noexcept {
    if (k_[0] == 0.0) return std::nullopt;
    return 1.0 / k_[0] + m2_;
  }
  double m2() const noexcept { return m2_; }
  double k1_star() const noexcept { return -1.0 / m2_; }

  /// k1 / (1 + k1 (1 + M2)), which equals 1/(M1 + 1) when k1 != 0.
  /// The denominator vanishes at k1 = -1/(1 + M2), inside the admissible range.
  double delta() const {
    const double den = 1.0 + k_[0] * (1.0 + m2_);
    if (!(den > 0.0)) throw DomainError("delta is undefined for k1 <= -1/(1+M2)");
    return k_[0] / den;
  }

  Params with_k1(double k1) const {
    Vec4 k = k_;
    k[0] = k1;
    return Params(k);
  }

 private:
  Vec4 k_;
  double m2_ = 0.0;
};

/// A population state on S4, nonnegative up to `tol` and summing to 1 within `tol`.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vec4 x, double tol = kDefaultTol) : x_(x) {
    double sum = 0.0;
    for (double v : x_) {
      if (!std::isfinite(v) || v < -tol) throw DomainError("coordinate outside the simplex");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw DomainError("coordinates do not sum to 1");
  }

  const Vec4& coords() const noexcept { return x_; }
  double operator[](std::size_t i) const noexcept { return x_[i]; }

 private:
  Vec4 x_;
};

inline SimplexPoint vertex(std::size_t m) {
  Vec4 x{0.0, 0.0, 0.0, 0.0};
  x.at(m) = 1.0;
  return SimplexPoint(x);
}

/// Q = (0, 0, 0, 1).
inline SimplexPoint corner_q() { return vertex(3); }

inline double max_abs_diff(const Vec4& a, const Vec4& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < kSpecies; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double flux(const Vec4& x, const Params& p) {
  double phi = 0.0;
  for (std::size_t i = 0; i < kSpecies; ++i) phi += p[i] * x[i] * x[prev(i)];
  return phi;
}

inline double flux(const SimplexPoint& x, const Params& p) { return flux(x.coords(), p); }

namespace detail {

// One step without constructing a SimplexPoint; preconditions are checked.
inline Vec4 step_raw(const Vec4& x, const Params& p) {
  const double den = 1.0 + flux(x, p);
  if (!(den > 0.0)) throw DomainError("1 + phi(x) is not positive");
  Vec4 out{};
  for (std::size_t i = 0; i < kSpecies; ++i) {
    const double growth = 1.0 + p[i] * x[prev(i)];
    if (!(growth > 0.0)) throw DomainError("1 + k_i x_{i-1} is not positive");
    out[i] = growth * x[i] / den;
  }
  return out;
}

}  // namespace detail

inline SimplexPoint map_step(const SimplexPoint& x, const Params& p) {
  return SimplexPoint(detail::step_raw(x.coords(), p));
}

/// Companion replicator field x_i (k_i x_{i-1} - phi(x)).
inline Vec4 vector_field(const SimplexPoint& x, const Params& p) {
  const double phi = flux(x, p);
  Vec4 v{};
  for (std::size_t i = 0; i < kSpecies; ++i) v[i] = x[i] * (p[i] * x[prev(i)] - phi);
  return v;
}

/// Discards `burn` images of x0, then returns the next n iterates.
inline std::vector<SimplexPoint> iterate(const SimplexPoint& x0, const Params& p, std::size_t n,
                                         std::size_t burn) {
  std::vector<SimplexPoint> out;
  out.reserve(n);
  Vec4 x = x0.coords();
  std::size_t it = 0;
  try {
    for (; it < burn; ++it) x = detail::step_raw(x, p);
    for (std::size_t j = 0; j < n; ++j, ++it) {
      x = detail::step_raw(x, p);
      out.emplace_back(x);
    }
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " at iteration " + std::to_string(it), it);
  }
  return out;
}

/// Interior fixed point P, p_i = 1 / (k_{i+1} M1).
inline SimplexPoint interior_fixed_point(const Params& p) {
  if (p.k1() == 0.0) {
    throw DegenerateParameter("k1 = 0: the interior fixed point coincides with Q = (0,0,0,1)");
  }
  const double m1 = *p.m1();
  Vec4 x{};
  for (std::size_t i = 0; i < kSpecies; ++i) x[i] = 1.0 / (p[next(i)] * m1);
  if (p.k1() < 0.0) {
    throw OutsideSimplex("k1* < k1 < 0: the fixed-point formula has negative coordinates", x);
  }
  return SimplexPoint(x);
}

/// Spectrum of a 4x4 derivative. `transversal_index` points at the eigenvalue
/// associated with the direction (1,1,1,1) when it can be singled out.
struct SpectrumReport {
  std::array<Complex, 4> eigenvalues{};
  std::array<double, 4> moduli{};
  std::optional<std::size_t> transversal_index;
};

inline SpectrumReport make_spectrum(const std::array<Complex, 4>& ev, std::optional<std::size_t> transversal) {
  SpectrumReport r;
  r.eigenvalues = ev;
  for (std::size_t i = 0; i < 4; ++i) r.moduli[i] = std::abs(ev[i]);
  r.transversal_index = transversal;
  return r;
}

/// Closed-form spectrum at P for k1 > 0, with s = 1/(M1+1):
///   index 0: 1 - s, the eigenvalue of the left eigenvector (1,1,1,1);
///   index j = 1,2,3: 1 + i^j s.
inline SpectrumReport closed_form_spectrum(const Params& p) {
  if (!(p.k1() > 0.0)) throw DegenerateParameter("closed-form spectrum requires k1 > 0");
  const double s = 1.0 / (*p.m1() + 1.0);
  const Complex unit(0.0, 1.0);
  std::array<Complex, 4> ev{};
  ev[0] = Complex(1.0 - s, 0.0);
  Complex w(1.0, 0.0);
  for (std::size_t j = 1; j < 4; ++j) {
    w *= unit;
    ev[j] = 1.0 + w * s;
  }
  return make_spectrum(ev, 0);
}

/// Analytic derivative of F (quotient rule).
inline Mat4 jacobian(const SimplexPoint& xp, const Params& p) {
  const Vec4& x = xp.coords();
  const double den = 1.0 + flux(x, p);
  if (!(den > 0.0)) throw DomainError("1 + phi(x) is not positive");
  Vec4 numer{};
  Vec4 dphi{};
  for (std::size_t i = 0; i < kSpecies; ++i) {
    const double growth = 1.0 + p[i] * x[prev(i)];
    if (!(growth > 0.0)) throw DomainError("1 + k_i x_{i-1} is not positive");
    numer[i] = growth * x[i];
    // phi contains x_j in the terms k_j x_j x_{j-1} and k_{j+1} x_{j+1} x_j.
    dphi[i] = p[i] * x[prev(i)] + p[next(i)] * x[next(i)];
  }
  Mat4 j = Mat4::Zero();
  for (std::size_t i = 0; i < kSpecies; ++i) {
    j(i, i) += (1.0 + p[i] * x[prev(i)]) / den;
    j(i, prev(i)) += p[i] * x[i] / den;
    for (std::size_t c = 0; c < kSpecies; ++c) j(i, c) -= numer[i] * dphi[c] / (den * den);
  }
  return j;
}

inline std::array<Complex, 4> eigenvalues(const Mat4& m) {
  Eigen::EigenSolver<Mat4> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue iteration did not converge");
  std::array<Complex, 4> ev{};
  for (int i = 0; i < 4; ++i) ev[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return ev;
}

/// Numeric spectrum of DF(x). On the simplex (1,...,1) is a left eigenvector
/// with eigenvalue 1/(1+phi(x)); its index is reported unless another
/// eigenvalue is indistinguishable from it.
inline SpectrumReport numeric_spectrum(const SimplexPoint& x, const Params& p, double separation = 1e-8) {
  const auto ev = eigenvalues(jacobian(x, p));
  const double target = 1.0 / (1.0 + flux(x, p));
  std::optional<std::size_t> idx;
  std::size_t close = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(ev[i] - target) <= separation) {
      ++close;
      idx = i;
    }
  }
  if (close != 1) idx.reset();
  return make_spectrum(ev, idx);
}

/// Smallest, over all pairings, of the largest distance between matched
/// eigenvalues. Used to compare spectra as multisets.
inline double matched_distance(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Outcome of the two fixed-point tests. `algebraic` is the characterization
/// by products (boundary points: k_i x_i x_{i-1} = 0; interior points:
/// k_i x_{i-1} = phi(x)); `direct` is ||F(x) - x||_inf <= tol.
struct FixedPointCertificate {
  bool fixed = false;
  bool boundary = false;
  bool algebraic = false;
  bool direct = false;
  double algebraic_defect = 0.0;
  double direct_defect = 0.0;
  std::string failed_clause;  // empty when fixed
};

inline FixedPointCertificate is_fixed_point(const SimplexPoint& xp, const Params& p, double tol = kDefaultTol) {
  const Vec4& x = xp.coords();
  FixedPointCertificate c;
  c.boundary = std::any_of(x.begin(), x.end(), [tol](double v) { return v <= tol; });
  const double phi = flux(x, p);
  for (std::size_t i = 0; i < kSpecies; ++i) {
    const double d = c.boundary ? std::abs(p[i] * x[i] * x[prev(i)]) : std::abs(p[i] * x[prev(i)] - phi);
    c.algebraic_defect = std::max(c.algebraic_defect, d);
  }
  c.algebraic = c.algebraic_defect <= tol;
  try {
    c.direct_defect = max_abs_diff(detail::step_raw(x, p), x);
  } catch (const DomainError&) {
    c.direct_defect = std::numeric_limits<double>::infinity();
  }
  c.direct = c.direct_defect <= tol;
  c.fixed = c.algebraic && c.direct;
  if (!c.algebraic && !c.direct) {
    c.failed_clause = "both";
  } else if (!c.algebraic) {
    c.failed_clause = c.boundary ? "k_i x_i x_{i-1} = 0" : "k_i x_{i-1} = phi(x)";
  } else if (!c.direct) {
    c.failed_clause = "F(x) = x";
  }
  return c;
}

}  // namespace hypercycle
