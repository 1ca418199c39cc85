#pragma once

// Invariant-curve numerics for small k1 > 0 and collapse to the corner Q for
// k1 <= 0. Radii and rotation are measured on xi, the center-plane coordinate
// of the reduced state.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include "hypercycle/coords.hpp"
#include "hypercycle/errors.hpp"
#include "hypercycle/model.hpp"

namespace hypercycle {

inline constexpr double kFixedPointThreshold = 1e-6;
inline constexpr double kCurveDispersion = 0.2;
inline constexpr double kEscapeRadius = 0.5;

struct OrbitSample {
  std::vector<ReducedState> states;
  Params params;
  ReducedState z0;
  std::size_t burn = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

enum class Classification { fixed_point, closed_curve, unresolved };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::fixed_point: return "fixed_point";
    case Classification::closed_curve: return "closed_curve";
    case Classification::unresolved: return "unresolved";
  }
  return "unresolved";
}

struct CurveEstimate {
  double k1 = 0.0;
  double delta = 0.0;
  double radius_mean = 0.0;
  double radius_std = 0.0;
  double rotation = 0.0;      // mean angular increment of xi per step
  double rms_distance = 0.0;  // sqrt(mean |z|^2) in the reduced state
  Classification classification = Classification::unresolved;
  double threshold = kFixedPointThreshold;
  std::string note;  // set when the point could not be simulated
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

struct SweepReport {
  std::vector<CurveEstimate> estimates;  // in input order
  std::vector<double> excluded_k1;       // points not classified closed_curve
  ScalingFit fit;
};

/// Real Fourier series z_c(theta) = sum_{|k| <= K} c_k e^{ik theta} with c_{-k} = conj(c_k);
/// only k = 0..K is stored.
struct FourierCurve {
  std::array<std::vector<std::complex<double>>, 3> modes;
  double rho = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t grid = 0;
  int iterations = 0;

  int mode_count() const { return static_cast<int>(modes[0].size()) - 1; }

  ReducedState at(double theta) const {
    ReducedState r;
    for (std::size_t c = 0; c < 3; ++c) {
      double v = modes[c][0].real();
      for (int k = 1; k <= mode_count(); ++k) {
        const auto& m = modes[c][k];
        v += 2.0 * (m.real() * std::cos(k * theta) - m.imag() * std::sin(k * theta));
      }
      r.z[c] = v;
    }
    return r;
  }
};

struct QConvergence {
  bool converged = false;
  std::size_t iterations = 0;
  double final_distance = 0.0;
};

/// max(1e5, 100/delta, 20/delta^2). The radial relaxation toward the curve runs at a
/// rate of order delta^2 per step, so the delta^2 term dominates for small delta.
inline std::size_t default_burn(double delta) {
  const double b = std::max({1e5, std::ceil(100.0 / delta), std::ceil(20.0 / (delta * delta))});
  return static_cast<std::size_t>(b);
}

inline constexpr std::size_t kDefaultSamples = 10000;

inline double positive_delta(const Params& p) {
  if (p.k1() == 0.0) throw SingularTransform("barycentric change is singular at k1 = 0");
  if (!(p.k1() > 0.0)) throw PreconditionViolation("the invariant curve exists only for k1 > 0");
  return p.delta();
}

inline ReducedState default_start(const Params& p) { return {{0.5 * std::sqrt(positive_delta(p)), 0.0, 0.0}}; }

/// Random direction at the default starting distance.
inline ReducedState random_start(const Params& p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  ReducedState r{{nd(gen), nd(gen), nd(gen)}};
  return (0.5 * std::sqrt(positive_delta(p)) / r.norm()) * r;
}

inline OrbitSample attract_orbit(const Params& p, const ReducedState& z0, std::size_t burn, std::size_t n,
                                 std::uint64_t seed = 0) {
  positive_delta(p);
  OrbitSample o{{}, p, z0, burn, n, seed};
  o.states.reserve(n);
  ReducedState z = z0;
  for (std::size_t it = 0; it < burn + n; ++it) {
    if (!(z.norm() <= kEscapeRadius)) throw DivergedOrbit("orbit left the neighbourhood of P", it);
    if (it >= burn) o.states.push_back(z);
    z = reduced_map(z, p);
  }
  return o;
}

inline OrbitSample attract_orbit(const Params& p) {
  return attract_orbit(p, default_start(p), default_burn(p.delta()), kDefaultSamples);
}

inline std::complex<double> xi_projection(const ReducedState& r) {
  using C = std::complex<double>;
  return C(0.25, -0.25) * r.z[0] + C(-0.25, -0.25) * r.z[1] + C(0.0, -0.5) * r.z[2];
}

inline CurveEstimate estimate_curve(const OrbitSample& o, double threshold = kFixedPointThreshold) {
  const std::size_t n = o.states.size();
  if (n < 1000) throw PreconditionViolation("estimate_curve needs at least 1000 recorded states");
  CurveEstimate e;
  e.k1 = o.params.k1();
  e.delta = o.params.delta();
  e.threshold = threshold;

  double sum = 0.0, sum_sq = 0.0, dist_sq = 0.0, turn = 0.0;
  std::size_t turns = 0;
  std::complex<double> prev_xi;
  for (std::size_t j = 0; j < n; ++j) {
    const auto xi = xi_projection(o.states[j]);
    const double r = std::abs(xi);
    sum += r;
    sum_sq += r * r;
    dist_sq += o.states[j].norm() * o.states[j].norm();
    if (j > 0 && r > 0.0 && std::abs(prev_xi) > 0.0) {
      turn += std::arg(xi / prev_xi);
      ++turns;
    }
    prev_xi = xi;
  }
  e.radius_mean = sum / n;
  e.radius_std = std::sqrt(std::max(0.0, sum_sq / n - e.radius_mean * e.radius_mean));
  e.rms_distance = std::sqrt(dist_sq / n);
  e.rotation = turns ? turn / turns : 0.0;

  if (e.radius_mean < threshold) {
    e.classification = Classification::fixed_point;
  } else if (e.radius_mean > 10.0 * threshold && e.radius_std < kCurveDispersion * e.radius_mean) {
    e.classification = Classification::closed_curve;
  }
  return e;
}

/// Least squares of log(radius_mean) against log(delta) over the closed_curve estimates.
inline ScalingFit fit_scaling(const std::vector<CurveEstimate>& est) {
  std::vector<double> xs, ys;
  for (const auto& e : est) {
    if (e.classification != Classification::closed_curve) continue;
    xs.push_back(std::log(e.delta));
    ys.push_back(std::log(e.radius_mean));
  }
  if (xs.size() < 4) throw InsufficientPoints("scaling fit needs at least 4 closed-curve points");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    mx += xs[j] / m;
    my += ys[j] / m;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxx += (xs[j] - mx) * (xs[j] - mx);
    sxy += (xs[j] - mx) * (ys[j] - my);
    syy += (ys[j] - my) * (ys[j] - my);
  }
  if (sxx == 0.0) throw InsufficientPoints("scaling fit needs distinct delta values");
  ScalingFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double d = ys[j] - f.intercept - f.slope * xs[j];
    ss_res += d * d;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  f.points = xs.size();
  return f;
}

struct SweepOptions {
  std::optional<std::size_t> burn;  // default_burn(delta) per point when empty
  std::size_t n = kDefaultSamples;
  unsigned jobs = 1;
};

/// One simulated point; transform or escape failures become an unresolved row.
inline CurveEstimate sweep_point(const Params& p, const SweepOptions& opt) {
  try {
    const std::size_t burn = opt.burn ? *opt.burn : default_burn(p.delta());
    return estimate_curve(attract_orbit(p, default_start(p), burn, opt.n));
  } catch (const Error& err) {
    CurveEstimate e;
    e.k1 = p.k1();
    e.delta = p.delta();
    e.note = err.what();
    return e;
  }
}

inline std::vector<CurveEstimate> sweep_estimates(const Params& base, const std::vector<double>& k1_values,
                                                  const SweepOptions& opt = {}) {
  std::vector<Params> ps;
  ps.reserve(k1_values.size());
  for (double k1 : k1_values) {
    if (!(k1 > 0.0)) throw PreconditionViolation("sweep values must be positive");
    ps.push_back(base.with_k1(k1));
  }
  std::vector<CurveEstimate> out(ps.size());
  std::atomic<std::size_t> next_index{0};
  auto worker = [&] {
    for (std::size_t j = next_index++; j < ps.size(); j = next_index++) out[j] = sweep_point(ps[j], opt);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(ps.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

inline void check_sweep_grid(const std::vector<double>& k1_values) {
  if (k1_values.size() < 4) throw InsufficientPoints("a sweep needs at least 4 k1 values");
  for (double k1 : k1_values) {
    if (!(k1 > 0.0)) throw PreconditionViolation("sweep values must be positive");
  }
  const auto [lo, hi] = std::minmax_element(k1_values.begin(), k1_values.end());
  if (*hi < 10.0 * *lo) throw PreconditionViolation("sweep values must span at least one decade");
}

inline SweepReport sweep_scaling(const Params& base, const std::vector<double>& k1_values,
                                 const SweepOptions& opt = {}) {
  check_sweep_grid(k1_values);
  SweepReport r;
  r.estimates = sweep_estimates(base, k1_values, opt);
  for (const auto& e : r.estimates) {
    if (e.classification != Classification::closed_curve) r.excluded_k1.push_back(e.k1);
  }
  r.fit = fit_scaling(r.estimates);
  return r;
}

inline std::vector<double> default_sweep_grid() { return {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1}; }

namespace detail {

// Layout of the unknown vector: per coordinate c, block [c * (2K+1), (c+1) * (2K+1)) holds
// Re c_0, then (Re c_k, Im c_k) for k = 1..K; the last entry is rho.
struct FourierLayout {
  int k;
  int block() const { return 2 * k + 1; }
  int size() const { return 3 * block() + 1; }
  int rho() const { return 3 * block(); }

  // d z_c(theta) / d(unknowns in block c)
  Eigen::RowVectorXd basis(double theta) const {
    Eigen::RowVectorXd b(block());
    b(0) = 1.0;
    for (int m = 1; m <= k; ++m) {
      b(2 * m - 1) = 2.0 * std::cos(m * theta);
      b(2 * m) = -2.0 * std::sin(m * theta);
    }
    return b;
  }
  Eigen::RowVectorXd basis_derivative(double theta) const {
    Eigen::RowVectorXd b(block());
    b(0) = 0.0;
    for (int m = 1; m <= k; ++m) {
      b(2 * m - 1) = -2.0 * m * std::sin(m * theta);
      b(2 * m) = -2.0 * m * std::cos(m * theta);
    }
    return b;
  }

  FourierCurve unpack(const Eigen::VectorXd& u) const {
    FourierCurve f;
    for (int c = 0; c < 3; ++c) {
      f.modes[c].assign(k + 1, {});
      f.modes[c][0] = {u(c * block()), 0.0};
      for (int m = 1; m <= k; ++m) f.modes[c][m] = {u(c * block() + 2 * m - 1), u(c * block() + 2 * m)};
    }
    f.rho = u(rho());
    return f;
  }
  Eigen::VectorXd pack(const FourierCurve& f) const {
    Eigen::VectorXd u(size());
    for (int c = 0; c < 3; ++c) {
      u(c * block()) = f.modes[c][0].real();
      for (int m = 1; m <= k; ++m) {
        u(c * block() + 2 * m - 1) = f.modes[c][m].real();
        u(c * block() + 2 * m) = f.modes[c][m].imag();
      }
    }
    u(rho()) = f.rho;
    return u;
  }
};

// Weights of the first row of C^{-1}: xi = w . z.
inline std::array<std::complex<double>, 3> xi_row() { return {{{0.25, -0.25}, {-0.25, -0.25}, {0.0, -0.5}}}; }

inline std::complex<double> xi_mode1(const FourierCurve& f) {
  const auto w = xi_row();
  std::complex<double> s;
  for (std::size_t c = 0; c < 3; ++c) s += w[c] * f.modes[c][1];
  return s;
}

// Shift the parametrisation so that the mode-1 coefficient of xi is real positive.
inline void fix_phase(FourierCurve& f) {
  const double a = std::arg(xi_mode1(f));
  for (auto& modes : f.modes) {
    for (int m = 1; m < static_cast<int>(modes.size()); ++m) modes[m] *= std::polar(1.0, -m * a);
  }
}

inline ReducedState closed_form_image(const ReducedState& z, const Params& p) { return reduced_map_closed_form(z, p); }

inline double invariance_defect(const FourierCurve& f, const Params& p, const std::vector<double>& thetas) {
  double worst = 0.0;
  for (double t : thetas) {
    const ReducedState d = closed_form_image(f.at(t), p) - f.at(t + f.rho);
    for (double v : d.z) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace detail

inline constexpr int kDefaultModes = 48;

/// Fit Fourier coefficients of the orbit against angle-sorted xi; the starting guess
/// for refine_curve.
inline FourierCurve initial_curve(const OrbitSample& o, const CurveEstimate& e, int modes) {
  const detail::FourierLayout lay{modes};
  const std::size_t n = o.states.size();
  Eigen::MatrixXd a(n, lay.block());
  Eigen::MatrixXd rhs(n, 3);
  for (std::size_t j = 0; j < n; ++j) {
    a.row(j) = lay.basis(std::arg(xi_projection(o.states[j])));
    for (int c = 0; c < 3; ++c) rhs(j, c) = o.states[j].z[c];
  }
  const Eigen::MatrixXd coef = a.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd u(lay.size());
  for (int c = 0; c < 3; ++c) u.segment(c * lay.block(), lay.block()) = coef.col(c);
  u(lay.rho()) = e.rotation;
  FourierCurve f = lay.unpack(u);
  detail::fix_phase(f);
  return f;
}

/// Gauss-Newton on G(z(theta_j)) = z(theta_j + rho) over a uniform grid of 4(2K+1) angles,
/// plus the phase condition Im(xi_1) = 0. Derivatives of G come from automatic
/// differentiation of the closed-form reduced map.
inline FourierCurve refine_curve(const Params& p, const OrbitSample& o, int modes = kDefaultModes,
                                 int max_iter = 50, double tol = 1e-10) {
  if (modes < 8) throw PreconditionViolation("refine_curve needs at least 8 modes");
  const CurveEstimate est = estimate_curve(o);
  if (est.classification != Classification::closed_curve) {
    throw PreconditionViolation("refine_curve needs an orbit classified closed_curve");
  }
  const detail::FourierLayout lay{modes};
  const int grid = 4 * lay.block();
  std::vector<double> thetas(grid);
  for (int j = 0; j < grid; ++j) thetas[j] = 2.0 * std::numbers::pi * j / grid;

  using AD = Eigen::AutoDiffScalar<Eigen::Vector3d>;
  const auto w = detail::xi_row();

  auto residual = [&](const FourierCurve& f, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(3 * grid + 1);
    if (jac) jac->setZero(3 * grid + 1, lay.size());
    const Eigen::VectorXd uf = lay.pack(f);
    for (int j = 0; j < grid; ++j) {
      const ReducedState z = f.at(thetas[j]);
      const ReducedState zs = f.at(thetas[j] + f.rho);
      std::array<AD, 3> zad;
      for (int c = 0; c < 3; ++c) zad[c] = AD(z.z[c], 3, c);
      const auto g = reduced_map_closed_form<AD>(zad, p);
      for (int c = 0; c < 3; ++c) r(3 * j + c) = g[c].value() - zs.z[c];
      if (!jac) continue;
      const Eigen::RowVectorXd b = lay.basis(thetas[j]);
      const Eigen::RowVectorXd bs = lay.basis(thetas[j] + f.rho);
      const Eigen::RowVectorXd dbs = lay.basis_derivative(thetas[j] + f.rho);
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) jac->block(3 * j + c, d * lay.block(), 1, lay.block()) += g[c].derivatives()(d) * b;
        jac->block(3 * j + c, c * lay.block(), 1, lay.block()) -= bs;
        (*jac)(3 * j + c, lay.rho()) = -dbs.dot(uf.segment(c * lay.block(), lay.block()));
      }
    }
    // Im(xi_1) = sum_c Im(w_c) Re(c_{c,1}) + Re(w_c) Im(c_{c,1})
    double im = 0.0;
    for (int c = 0; c < 3; ++c) {
      im += w[c].imag() * f.modes[c][1].real() + w[c].real() * f.modes[c][1].imag();
      if (jac) {
        (*jac)(3 * grid, c * lay.block() + 1) = w[c].imag();
        (*jac)(3 * grid, c * lay.block() + 2) = w[c].real();
      }
    }
    r(3 * grid) = im;
  };

  FourierCurve f = initial_curve(o, est, modes);
  Eigen::VectorXd u = lay.pack(f);
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residual(f, r, &jac);
  double best = r.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < max_iter && best >= 0.01 * tol; ++it) {
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
    // backtrack until the residual norm decreases
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-4; lambda *= 0.5) {
      const Eigen::VectorXd trial = u + lambda * step;
      const FourierCurve ft = lay.unpack(trial);
      Eigen::VectorXd rt;
      residual(ft, rt, nullptr);
      if (rt.norm() < r.norm()) {
        u = trial;
        f = ft;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    residual(f, r, &jac);
    best = std::min(best, r.lpNorm<Eigen::Infinity>());
  }
  f.grid = static_cast<std::size_t>(grid);
  f.iterations = it;
  f.residual = detail::invariance_defect(f, p, thetas);
  if (!(f.residual < tol)) throw NoConvergence("invariance equation did not converge", f.residual);
  return f;
}

/// Mean |xi(theta)| over a uniform angle grid.
inline double curve_radius(const FourierCurve& f, int samples = 4096) {
  double s = 0.0;
  for (int j = 0; j < samples; ++j) s += std::abs(xi_projection(f.at(2.0 * std::numbers::pi * j / samples)));
  return s / samples;
}

/// Iterate the original map from an interior x0 until the sup distance to Q is at most tol.
inline QConvergence converge_to_Q(const Params& p, const SimplexPoint& x0, double tol, std::size_t max_iter) {
  if (p.k1() > 0.0) throw PreconditionViolation("collapse to Q is expected only for k1 <= 0");
  for (double v : x0.coords()) {
    if (!(v > 0.0)) throw PreconditionViolation("x0 must be interior");
  }
  const Vec4 q = corner_q().coords();
  Vec4 x = x0.coords();
  QConvergence rec;
  rec.final_distance = max_abs_diff(x, q);
  while (rec.iterations < max_iter && rec.final_distance > tol) {
    x = detail::step_raw(x, p);
    // x1 decays geometrically when k1 < 0; subnormal arithmetic is very slow
    for (double& v : x) {
      if (v < std::numeric_limits<double>::min()) v = 0.0;
    }
    ++rec.iterations;
    rec.final_distance = max_abs_diff(x, q);
  }
  rec.converged = rec.final_distance <= tol;
  return rec;
}

}  // namespace hypercycle
