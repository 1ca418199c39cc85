#pragma once

// The nine acceptance criteria as runnable checks. Each returns a verdict with a
// one-line measurement; tolerances and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hypercycle/coords.hpp"
#include "hypercycle/crosscheck.hpp"
#include "hypercycle/curve.hpp"
#include "hypercycle/model.hpp"
#include "hypercycle/normalform.hpp"

namespace hypercycle::acceptance {

struct Verdict {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;  // seconds; 0 means no runtime bound

  std::string line() const {
    std::ostringstream os;
    os.precision(3);
    os << (passed ? "[PASS] " : "[FAIL] ") << id << " " << title << ": " << detail << " (" << seconds << " s";
    if (budget > 0.0) os << ", budget " << budget << " s";
    os << ")";
    return os.str();
  }
};

namespace tol {
inline constexpr double fixed_point = 1e-12;
inline constexpr double eigenvalue = 1e-8;
inline constexpr double modulus_sq = 1e-10;
inline constexpr double slope_center = 0.5;
inline constexpr double slope_halfwidth = 0.1;
inline constexpr double r_squared = 0.98;
inline constexpr double q_distance = 1e-8;
inline constexpr std::size_t q_iterations = 1000000;
inline constexpr double invariance = 1e-10;
inline constexpr double rotation_rel = 0.02;
inline constexpr double euler_rel = 1e-14;
inline constexpr double round_trip = 1e-12;
inline constexpr double ratio_lo = 3.5;
inline constexpr double ratio_hi = 4.5;
}  // namespace tol

inline constexpr std::uint64_t kSeed = 20240611u;

namespace detail {

struct Outcome {
  bool ok;
  std::string detail;
};

inline Verdict timed(int id, std::string title, double budget, const std::function<Outcome()>& body) {
  Verdict v;
  v.id = id;
  v.title = std::move(title);
  v.budget = budget;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.passed = o.ok;
  v.detail = o.detail;
  if (budget > 0.0 && v.seconds >= budget) {
    v.passed = false;
    v.detail += "; over runtime budget";
  }
  return v;
}

inline std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline Vec4 dirichlet(std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  Vec4 x{};
  double s = 0.0;
  for (double& v : x) {
    v = e(gen) + 1e-9;
    s += v;
  }
  for (double& v : x) v /= s;
  return x;
}

inline Params draw_params(std::mt19937_64& gen, double k1_lo, double k1_hi) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  const Vec4 k{0.0, u(gen), u(gen), u(gen)};
  const double star = -1.0 / (1.0 / k[1] + 1.0 / k[2] + 1.0 / k[3]);
  const double lo = std::max(k1_lo, 0.9 * star);
  return Params({std::uniform_real_distribution<double>(lo, k1_hi)(gen), k[1], k[2], k[3]});
}

}  // namespace detail

inline Verdict resonant_coefficient() {
  return detail::timed(1, "resonant coefficient, exact", 1.0, [] {
    const NormalFormDerivation d = derive_normal_form();
    const ExactComplex alpha(Rational(-16) / 5, Rational(-48) / 5);
    const ExactComplex nu(Rational(64) / 5);
    const bool ok = d.result.alpha1 == alpha && d.result.nu_resonant == nu;
    return detail::Outcome{ok, "alpha1 = " + d.result.alpha1.str() + ", nu = " + d.result.nu_resonant.str()};
  });
}

inline Verdict quadratic_kill_table() {
  return detail::timed(2, "quadratic-kill table, exact", 0.0, [] {
    const NormalFormDerivation d = derive_normal_form();
    const auto expected = reference::kill_table();
    int matches = 0;
    std::string bad;
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t k = 0; k < 6; ++k) {
        if (d.kill.table[t][k] == expected[t][k]) {
          ++matches;
        } else {
          bad += " " + QuadraticKill::name(t, k);
        }
      }
    }
    bool zero = true;
    for (std::size_t c = 0; c < 3; ++c) zero = zero && d.result.g2[c].homogeneous_part(2).is_zero();
    std::string det = std::to_string(matches) + "/18 coefficients match (a200 = " + d.kill["a200"].str() +
                      "), transformed quadratic part " + (zero ? "zero" : "NONZERO");
    if (!bad.empty()) det += "; mismatched:" + bad;
    return detail::Outcome{matches == 18 && zero, det};
  });
}

inline Verdict diagonalization() {
  return detail::timed(3, "diagonalization, exact", 0.0, [] {
    const ExactComplex i = ExactComplex::i();
    LinearMap3 c, cinv;
    c.a = {{{1, 1, 1}, {-1, -1, 1}, {i, -i, -1}}};
    cinv.a = {{{1 - i, -1 - i, -2 * i}, {1 + i, -1 + i, 2 * i}, {2, 2, 0}}};
    cinv = ExactComplex::ratio(1, 4) * cinv;
    const LinearMap3 dg = linear_part(g_jet(1));
    const bool inverse = cinv * c == LinearMap3::identity();
    const bool diag = cinv * dg * c == LinearMap3::diag(i, -i, ExactComplex(-1));
    return detail::Outcome{inverse && diag, std::string("Cinv C = I ") + (inverse ? "holds" : "FAILS") +
                                                ", Cinv Dg(0) C = diag(i, -i, -1) " + (diag ? "holds" : "FAILS")};
  });
}

inline Verdict jet_cross_check() {
  return detail::timed(4, "jet cross-check, exact", 0.0, [] {
    const JetMap3 g = g_jet(3);
    const auto parts = reference::g_parts();
    int coefficients = 0;
    int mismatches = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      for (int deg = 2; deg <= 3; ++deg) {
        const Jet3 computed = g[c].homogeneous_part(deg);
        for (const auto& e : monomials_of_degree(deg)) {
          ++coefficients;
          if (!(computed.coeff(e) == parts[c][deg - 2].coeff(e))) ++mismatches;
        }
      }
    }
    const bool p33 = g[2].homogeneous_part(3).is_zero();
    return detail::Outcome{mismatches == 0 && p33, std::to_string(coefficients - mismatches) + "/" +
                                                       std::to_string(coefficients) +
                                                       " degree-2/3 coefficients match, P33 " +
                                                       (p33 ? "= 0" : "!= 0")};
  });
}

inline Verdict fixed_point_spectrum() {
  return detail::timed(5, "fixed point and spectrum, numeric", 5.0, [] {
    std::mt19937_64 gen(kSeed);
    double worst_fp = 0.0, worst_ev = 0.0, worst_mod = 0.0;
    for (int s = 0; s < 100; ++s) {
      Params p = detail::draw_params(gen, 0.0, 1.0);
      if (p.k1() == 0.0) p = p.with_k1(1.0);
      const SimplexPoint x = interior_fixed_point(p);
      worst_fp = std::max(worst_fp, max_abs_diff(map_step(x, p).coords(), x.coords()));
      const auto numeric = eigenvalues(jacobian(x, p));
      const double s1 = 1.0 / (*p.m1() + 1.0);
      Complex w(1.0, 0.0);
      for (int j = 1; j <= 3; ++j) {
        w *= Complex(0.0, 1.0);
        const Complex target = 1.0 + w * s1;
        double best = std::numeric_limits<double>::infinity();
        Complex nearest;
        for (const auto& ev : numeric) {
          if (std::abs(ev - target) < best) {
            best = std::abs(ev - target);
            nearest = ev;
          }
        }
        worst_ev = std::max(worst_ev, best);
        if (j == 1) worst_mod = std::max(worst_mod, std::abs(std::norm(nearest) - (1.0 + s1 * s1)));
      }
    }
    const bool ok = worst_fp < tol::fixed_point && worst_ev < tol::eigenvalue && worst_mod < tol::modulus_sq;
    return detail::Outcome{ok, "100 draws: max |F(P)-P| = " + detail::num(worst_fp) + ", max eigenvalue error = " +
                                   detail::num(worst_ev) + ", max ||lambda1|^2 - (1+s^2)| = " +
                                   detail::num(worst_mod)};
  });
}

inline Verdict radius_law(unsigned jobs = 1) {
  return detail::timed(6, "radius law", 180.0, [jobs] {
    const SweepReport r = sweep_scaling(Params({1.0, 1.0, 1.0, 1.0}), default_sweep_grid(), {std::nullopt, kDefaultSamples, jobs});
    const bool ok = std::abs(r.fit.slope - tol::slope_center) <= tol::slope_halfwidth && r.fit.r_squared >= tol::r_squared;
    return detail::Outcome{ok, "slope = " + detail::num(r.fit.slope) + ", r^2 = " + detail::num(r.fit.r_squared) +
                                   " over " + std::to_string(r.fit.points) + " points"};
  });
}

inline Verdict degenerate_side() {
  return detail::timed(7, "degenerate side", 30.0, [] {
    const SimplexPoint x0({0.25, 0.25, 0.25, 0.25});
    bool ok = true;
    std::string det;
    for (double k1 : {0.0, -0.05, -0.1}) {
      const QConvergence r = converge_to_Q(Params({k1, 1.0, 1.0, 1.0}), x0, tol::q_distance, tol::q_iterations);
      ok = ok && r.converged;
      if (!det.empty()) det += "; ";
      det += "k1 = " + detail::num(k1) + ": |x-Q| = " + detail::num(r.final_distance) + " after " +
             std::to_string(r.iterations) + " steps";
    }
    return detail::Outcome{ok, det};
  });
}

inline Verdict invariance_refinement() {
  return detail::timed(8, "invariance refinement", 30.0, [] {
    const Params p({0.05, 1.0, 1.0, 1.0});
    const OrbitSample o = attract_orbit(p);
    const CurveEstimate e = estimate_curve(o);
    const FourierCurve f = refine_curve(p, o);
    const double rel = std::abs(f.rho / e.rotation - 1.0);
    const bool ok = f.residual < tol::invariance && rel <= tol::rotation_rel;
    return detail::Outcome{ok, "residual = " + detail::num(f.residual) + ", rho = " + detail::num(f.rho) +
                                   " vs orbit rotation " + detail::num(e.rotation) + " (rel " + detail::num(rel) + ")"};
  });
}

inline Verdict identities() {
  return detail::timed(9, "identity and round-trip properties", 0.0, [] {
    std::mt19937_64 gen(kSeed + 9);
    double euler = 0.0, round = 0.0;
    for (int s = 0; s < 10000; ++s) {
      const Params p = detail::draw_params(gen, -0.3, 2.0);
      const SimplexPoint x(detail::dirichlet(gen));
      const Vec4 f = hypercycle::detail::step_raw(x.coords(), p);
      const double phi = flux(x, p);
      for (std::size_t i = 0; i < 4; ++i) {
        const double lhs = (f[i] - x[i]) * (1.0 + phi);
        const double rhs = x[i] * (p[i] * x[prev(i)] - phi);
        const double scale = std::max({f[i] * (1.0 + phi), x[i] * (1.0 + phi), x[i] * std::abs(p[i] * x[prev(i)]),
                                       x[i] * std::abs(phi)}) + 1e-300;
        euler = std::max(euler, std::abs(lhs - rhs) / scale);
      }
      if (p.k1() != 0.0) {
        const BarycentricPoint y = to_barycentric(x, p);
        round = std::max(round, max_abs_diff(from_barycentric(y, p).coords(), x.coords()));
      }
    }

    // remainder |G(z) - z - delta g(z)| at fixed z as delta halves, k2 = k3 = k4 = 1
    auto remainder = [](const ReducedState& z, double delta) {
      const Params p({delta / (1.0 - 4.0 * delta), 1.0, 1.0, 1.0});
      const auto g = g_exact(z);
      const ReducedState lin{{z.z[0] + delta * g[0], z.z[1] + delta * g[1], z.z[2] + delta * g[2]}};
      return (reduced_map(z, p) - lin).norm();
    };
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int s = 0; s < 20; ++s) {
      ReducedState z{{u(gen), u(gen), u(gen)}};
      if (z.norm() > 0.05) z = (0.05 / z.norm()) * z;
      double prev_r = remainder(z, 0.05);
      for (double d = 0.025; d > 0.006; d /= 2.0) {
        const double r = remainder(z, d);
        lo = std::min(lo, prev_r / r);
        hi = std::max(hi, prev_r / r);
        prev_r = r;
      }
    }
    const bool ok = euler <= tol::euler_rel && round <= tol::round_trip && lo >= tol::ratio_lo && hi <= tol::ratio_hi;
    return detail::Outcome{ok, "Euler defect " + detail::num(euler) + " (relative), round trip " + detail::num(round) +
                                   ", remainder ratio per halving in [" + detail::num(lo) + ", " + detail::num(hi) +
                                   "]"};
  });
}

inline Verdict run(int id, unsigned jobs = 1) {
  switch (id) {
    case 1: return resonant_coefficient();
    case 2: return quadratic_kill_table();
    case 3: return diagonalization();
    case 4: return jet_cross_check();
    case 5: return fixed_point_spectrum();
    case 6: return radius_law(jobs);
    case 7: return degenerate_side();
    case 8: return invariance_refinement();
    case 9: return identities();
    default: throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  }
}

inline constexpr int kCriteria = 9;

inline std::vector<Verdict> run_all(unsigned jobs = 1) {
  std::vector<Verdict> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run(id, jobs));
  return out;
}

}  // namespace hypercycle::acceptance
