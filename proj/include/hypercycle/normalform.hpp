#pragma once

// Exact cubic normal form of the leading-order field z' = g(z).
//
// Steps: diagonalize Dg(0) with z = C zeta, zeta = (xi, conj xi, eta);
// remove every quadratic monomial with a near-identity change zeta = x + h~(x)
// solved from the homological equations; read the resonant cubic
// coefficients of Dh^{-1} g1(h(x)). Non-resonant cubic terms are left in
// place because a further cubic change does not move the resonant ones.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hypercycle/coords.hpp"
#include "hypercycle/errors.hpp"
#include "hypercycle/exact.hpp"
#include "hypercycle/jets.hpp"

namespace hypercycle {

inline const Labels& eigen_labels() {
  static const Labels l{"xi", "xibar", "eta"};
  return l;
}

struct EigenStructure {
  LinearMap3 c;
  LinearMap3 cinv;
  std::array<ExactComplex, 3> spectrum;  // (i, -i, -1)
};

/// C has columns v1 = (1,-1,i), v2 = (1,-1,-i), v3 = (1,1,-1).
/// Both identities Cinv C = Id and Cinv Dg(0) C = diag(spectrum) are checked
/// against the linear part of g_jet.
inline EigenStructure build_eigenstructure() {
  const ExactComplex i = ExactComplex::i();
  EigenStructure es;
  es.c.a = {{{1, 1, 1}, {-1, -1, 1}, {i, -i, -1}}};
  const ExactComplex q = ExactComplex::ratio(1, 4);
  LinearMap3 raw;
  raw.a = {{{1 - i, -1 - i, -2 * i}, {1 + i, -1 + i, 2 * i}, {2, 2, 0}}};
  es.cinv = q * raw;
  es.spectrum = {i, -i, -1};

  if (es.cinv * es.c != LinearMap3::identity()) throw NotInverse("Cinv * C is not the identity");
  const LinearMap3 dg = linear_part(g_jet(1));
  if (es.cinv * dg * es.c != LinearMap3::diag(es.spectrum[0], es.spectrum[1], es.spectrum[2])) {
    throw Discrepancy("Cinv Dg(0) C is not diagonal with the expected spectrum");
  }
  return es;
}

/// g1(zeta) = C^{-1} g(C zeta).
inline JetMap3 conjugated_jet(const JetMap3& gjet, const EigenStructure& es) {
  return linear_conjugate(gjet, es.c, es.cinv, eigen_labels());
}

/// Coefficients of the quadratic change h(x) = x + h~(x), x = (x, y, z).
/// Component t uses letter a, b, c; the suffix is the exponent triple.
struct QuadraticKill {
  // table[t][k] pairs with quadratic_exponents()[k]
  std::array<std::array<ExactComplex, 6>, 3> table{};
  JetMap3 htilde{3, default_labels()};

  /// a200 a020 a002 a110 a101 a011 ordering, matching a written table.
  static const std::array<Exponent, 6>& quadratic_exponents() {
    static const std::array<Exponent, 6> e{{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
    return e;
  }
  static std::string name(std::size_t component, std::size_t k) {
    const auto& e = quadratic_exponents()[k];
    return std::string(1, "abc"[component]) + std::to_string(e[0]) + std::to_string(e[1]) + std::to_string(e[2]);
  }
  /// Lookup by name, e.g. "a011".
  const ExactComplex& operator[](const std::string& key) const {
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t k = 0; k < 6; ++k) {
        if (name(t, k) == key) return table[t][k];
      }
    }
    throw std::out_of_range("no kill coefficient named " + key);
  }
};

inline ExactComplex homological_divisor(const Exponent& m, std::size_t target,
                                        const std::array<ExactComplex, 3>& spectrum) {
  ExactComplex d = -spectrum[target];
  for (std::size_t v = 0; v < 3; ++v) d += spectrum[v] * ExactComplex(static_cast<long>(m[v]));
  return d;
}

/// Solves (<m, lambda> - lambda_t) h_{m,t} = [g1]_{m,t} for every quadratic
/// monomial m and component t.
inline QuadraticKill solve_quadratic_kill(const JetMap3& g1, const std::array<ExactComplex, 3>& spectrum) {
  if (linear_part(g1) != LinearMap3::diag(spectrum[0], spectrum[1], spectrum[2])) {
    throw BadJetShape("g1 linear part is not diag(spectrum)");
  }
  QuadraticKill k;
  k.htilde = JetMap3(g1.degree_bound(), default_labels());
  const auto& exps = QuadraticKill::quadratic_exponents();
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t n = 0; n < exps.size(); ++n) {
      const ExactComplex div = homological_divisor(exps[n], t, spectrum);
      if (div.is_zero()) throw ResonantDivisor("resonant quadratic monomial " + QuadraticKill::name(t, n));
      k.table[t][n] = g1[t].coeff(exps[n]) / div;
      k.htilde[t].set(exps[n], k.table[t][n]);
    }
  }
  return k;
}

inline QuadraticKill solve_quadratic_kill(const JetMap3& g1, const EigenStructure& es) {
  return solve_quadratic_kill(g1, es.spectrum);
}

/// g2(x) = Dh(x)^{-1} g1(h(x)) through degree 3.
inline JetMap3 transformed_field(const JetMap3& g1, const QuadraticKill& kill) {
  const int bound = g1.degree_bound();
  const JetMap3 h = JetMap3::identity(bound, default_labels()) + kill.htilde;
  const JetMap3 composed = jet_substitute(g1.with_labels(default_labels()), h);
  return hypercycle::apply(truncated_inverse_jacobian(kill.htilde), composed);
}

struct NormalFormResult {
  ExactComplex omega;             // rotation frequency
  ExactComplex stable_eigenvalue; // A
  ExactComplex alpha1;            // coefficient of xi^2 conj(xi) in component 1
  ExactComplex alpha1_mirror;     // coefficient of xi conj(xi)^2 in component 2
  ExactComplex nu_resonant;       // coefficient of xi conj(xi) eta in component 3
  int weak_stability_order = 0;   // 1 when Re(alpha1) < 0, else 0
  bool verdict = false;           // Re(alpha1) < 0
  JetMap3 g2{3, default_labels()};
};

inline NormalFormResult cubic_normal_form(const JetMap3& g1, const QuadraticKill& kill,
                                          const std::array<ExactComplex, 3>& spectrum) {
  NormalFormResult nf;
  nf.g2 = transformed_field(g1, kill);
  if (linear_part(nf.g2) != linear_part(g1)) throw Discrepancy("the quadratic change altered the linear part");
  if (!nf.g2.homogeneous_part(2)[0].is_zero() || !nf.g2.homogeneous_part(2)[1].is_zero() ||
      !nf.g2.homogeneous_part(2)[2].is_zero()) {
    throw Discrepancy("quadratic terms survive the change of variables");
  }
  nf.omega = spectrum[0].im();
  nf.stable_eigenvalue = spectrum[2];
  nf.alpha1 = nf.g2[0].coeff({2, 1, 0});
  nf.alpha1_mirror = nf.g2[1].coeff({1, 2, 0});
  nf.nu_resonant = nf.g2[2].coeff({1, 1, 1});
  if (nf.alpha1_mirror != nf.alpha1.conj()) {
    throw Discrepancy("component-2 resonant coefficient " + nf.alpha1_mirror.str() + " is not conj(alpha1) = " +
                      nf.alpha1.conj().str());
  }
  nf.verdict = nf.alpha1.re() < 0;
  nf.weak_stability_order = nf.verdict ? 1 : 0;
  return nf;
}

inline NormalFormResult cubic_normal_form(const JetMap3& g1, const QuadraticKill& kill) {
  const std::array<ExactComplex, 3> spectrum{linear_part(g1)(0, 0), linear_part(g1)(1, 1), linear_part(g1)(2, 2)};
  return cubic_normal_form(g1, kill, spectrum);
}

struct StabilityVerdict {
  int order = 0;
  bool weakly_stable = false;
  bool spectrum_hypothesis = false;  // +-i omega plus a negative real eigenvalue
  bool theorem_applies = false;      // both hypotheses hold
  std::string note;
};

inline StabilityVerdict weak_stability_verdict(const NormalFormResult& nf) {
  if (nf.alpha1.re() == 0) {
    throw IndeterminateOrder("Re(alpha1) = 0: the order is above 1 and needs jets beyond degree 3");
  }
  StabilityVerdict v;
  v.spectrum_hypothesis = nf.omega.is_real() && nf.omega.re() != 0 && nf.stable_eigenvalue.is_real() &&
                          nf.stable_eigenvalue.re() < 0;
  v.weakly_stable = nf.alpha1.re() < 0;
  v.order = v.weakly_stable ? 1 : 0;
  v.theorem_applies = v.spectrum_hypothesis && v.weakly_stable;
  v.note = v.theorem_applies
               ? "attracting invariant curves of radius O(eps^(1/2)) exist for eps = delta small; delta = k1 + O(k1^2)"
               : "hypotheses not met";
  return v;
}

/// Every intermediate of the derivation, for transcripts and cross-checks.
struct NormalFormDerivation {
  JetMap3 g;
  EigenStructure eigen;
  JetMap3 g1;
  QuadraticKill kill;
  NormalFormResult result;
  StabilityVerdict verdict;
};

inline NormalFormDerivation derive_normal_form() {
  NormalFormDerivation d{g_jet(3), build_eigenstructure(), JetMap3(3), QuadraticKill{}, NormalFormResult{}, {}};
  d.g1 = conjugated_jet(d.g, d.eigen);
  d.kill = solve_quadratic_kill(d.g1, d.eigen);
  d.result = cubic_normal_form(d.g1, d.kill, d.eigen.spectrum);
  d.verdict = weak_stability_verdict(d.result);
  return d;
}

}  // namespace hypercycle
