#pragma once

// Published intermediate displays of the normal-form derivation, written out
// independently of the pipeline, and a comparison that lists every mismatch.
// The pipeline is the ground truth; a mismatch is reported, never absorbed.

#include <string>
#include <utility>
#include <vector>

#include "hypercycle/jets.hpp"
#include "hypercycle/normalform.hpp"

namespace hypercycle {

struct CrossCheckMismatch {
  std::string item;
  std::string expected;
  std::string computed;
};

struct CrossCheckReport {
  std::size_t checks = 0;
  std::vector<CrossCheckMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

namespace reference {

using Term = std::pair<Exponent, ExactComplex>;

inline ExactComplex gi(long re, long im) { return {Rational(re), Rational(im)}; }

inline Jet3 from_terms(const std::vector<Term>& terms, const Labels& labels) {
  Jet3 j(3, labels);
  for (const auto& [e, c] : terms) j.accumulate(e, c);
  return j;
}

/// Degree-2 and degree-3 parts of g in (z1, z3, z4), from the factored forms.
/// Index [component][0] is the quadratic part, [component][1] the cubic one.
inline std::array<std::array<Jet3, 2>, 3> g_parts() {
  const Labels& l = reduced_labels();
  const Jet3 z1 = Jet3::variable(0, 3, l);
  const Jet3 z3 = Jet3::variable(1, 3, l);
  const Jet3 z4 = Jet3::variable(2, 3, l);
  const Jet3 u = z1 + z3;
  const Jet3 s = z1 + z3 + z4;
  const ExactComplex four(4);
  const ExactComplex two(2);
  return {{
      {z4 * z4 * ExactComplex(-4) + z4 * z1 * four + u * u,
       (z1 - z4) * (u + z4 * two) * (u - z4 * two) * four},
      {z4 * s * four - z3 * s * four + u * u, (z3 - z4) * (u + z4 * two) * (u + z4 * two) * four},
      {u * u, Jet3(3, l)},
  }};
}

/// Quadratic and cubic parts of g(C zeta).
inline std::array<std::array<Jet3, 2>, 3> g_of_c_parts() {
  const Labels& l = eigen_labels();
  const Jet3 x = Jet3::variable(0, 3, l);
  const Jet3 xb = Jet3::variable(1, 3, l);
  const Jet3 e = Jet3::variable(2, 3, l);
  const ExactComplex i = ExactComplex::i();
  const Jet3 q1 = (e * e * ExactComplex(-1) + x * x * (1 + i) - x * xb * ExactComplex(2) + x * e * (-1 + 3 * i) +
                   xb * e * (-1 - 3 * i) + xb * xb * (1 - i)) *
                  ExactComplex(4);
  const Jet3 c1 = (x * i - xb * i - e * ExactComplex(2) - x - xb) * (x * i - xb * i - e * ExactComplex(2)) * (x - xb) *
                  (16 * i);
  const Jet3 q2 = (e * e * ExactComplex(-1) + x * x * (-1 + i) + x * xb * ExactComplex(2) + x * e * (1 - i) +
                   xb * e * (1 + i) - xb * xb * (1 + i)) *
                  ExactComplex(4);
  const Jet3 c2 = (x * i - xb * i - e * ExactComplex(2) + x + xb) * (x - xb) * (x - xb) * ExactComplex(16);
  return {{{q1, c1}, {q2, c2}, {e * e * ExactComplex(4), Jet3(3, l)}}};
}

/// g1 = C^{-1} g(C zeta), degrees 1 to 3 per component.
inline std::array<Jet3, 3> g1_terms() {
  const Labels& l = eigen_labels();
  // Quadratic terms carry an overall factor 4 and cubic terms a factor 16.
  const auto scaled = [&](std::vector<Term> q, std::vector<Term> c, Term lin) {
    Jet3 j = from_terms({lin}, l);
    j += from_terms(q, l) * ExactComplex(4);
    j += from_terms(c, l) * ExactComplex(16);
    return j;
  };
  return {
      scaled({{{2, 0, 0}, gi(1, 0)}, {{1, 1, 0}, gi(-1, 0)}, {{1, 0, 1}, gi(0, 1)}, {{0, 1, 1}, gi(-1, -1)}},
             {{{3, 0, 0}, gi(0, -1)},
              {{2, 1, 0}, gi(0, 2)},
              {{2, 0, 1}, gi(2, 0)},
              {{1, 2, 0}, gi(0, -1)},
              {{1, 1, 1}, gi(-3, 1)},
              {{1, 0, 2}, gi(1, 1)},
              {{0, 2, 1}, gi(1, -1)},
              {{0, 1, 2}, gi(-1, -1)}},
             {{1, 0, 0}, gi(0, 1)}),
      scaled({{{1, 1, 0}, gi(-1, 0)}, {{1, 0, 1}, gi(-1, 1)}, {{0, 2, 0}, gi(1, 0)}, {{0, 1, 1}, gi(0, -1)}},
             {{{0, 3, 0}, gi(0, 1)},
              {{2, 1, 0}, gi(0, 1)},
              {{2, 0, 1}, gi(1, 1)},
              {{1, 2, 0}, gi(0, -2)},
              {{1, 1, 1}, gi(-3, -1)},
              {{1, 0, 2}, gi(-1, 1)},
              {{0, 2, 1}, gi(2, 0)},
              {{0, 1, 2}, gi(1, -1)}},
             {{0, 1, 0}, gi(0, -1)}),
      scaled({{{2, 0, 0}, gi(0, 1)},
              {{1, 0, 1}, gi(0, 1)},
              {{0, 2, 0}, gi(0, -1)},
              {{0, 1, 1}, gi(0, -1)},
              {{0, 0, 2}, gi(-1, 0)}},
             {{{3, 0, 0}, gi(1, 0)},
              {{2, 1, 0}, gi(-1, 0)},
              {{2, 0, 1}, gi(1, 1)},
              {{1, 2, 0}, gi(-1, 0)},
              {{1, 1, 1}, gi(-2, 0)},
              {{1, 0, 2}, gi(0, 2)},
              {{0, 3, 0}, gi(1, 0)},
              {{0, 2, 1}, gi(1, -1)},
              {{0, 1, 2}, gi(0, -2)}},
             {{0, 0, 1}, gi(-1, 0)}),
  };
}

/// Kill coefficients in QuadraticKill ordering (200, 020, 002, 110, 101, 011).
inline std::array<std::array<ExactComplex, 6>, 3> kill_table() {
  const ExactComplex i = ExactComplex::i();
  const ExactComplex f = ExactComplex::ratio(4, 5);
  return {{
      {-4 * i, 0, 0, -4 * i, -4 * i, f * (3 - i)},
      {0, 4 * i, 0, 4 * i, f * (3 + i), 4 * i},
      {f * (2 + i), f * (2 - i), 4, 0, 4, 4},
  }};
}

/// Quadratic part of g2 written as f + s * h for each kill coefficient h:
/// pairs (f, s) in QuadraticKill ordering.
inline std::array<std::array<std::pair<ExactComplex, ExactComplex>, 6>, 3> g2_quadratic_structure() {
  return {{
      {{{gi(4, 0), gi(0, -1)},
        {gi(0, 0), gi(0, 3)},
        {gi(0, 0), gi(2, 1)},
        {gi(-4, 0), gi(0, 1)},
        {gi(0, 4), gi(1, 0)},
        {gi(-4, -4), gi(1, 2)}}},
      {{{gi(0, 0), gi(0, -3)},
        {gi(4, 0), gi(0, 1)},
        {gi(0, 0), gi(2, -1)},
        {gi(-4, 0), gi(0, -1)},
        {gi(-4, 4), gi(1, -2)},
        {gi(0, -4), gi(1, 0)}}},
      {{{gi(0, 4), gi(-1, -2)},
        {gi(0, -4), gi(-1, 2)},
        {gi(-4, 0), gi(1, 0)},
        {gi(0, 0), gi(-1, 0)},
        {gi(0, 4), gi(0, -1)},
        {gi(0, -4), gi(0, 1)}}},
  }};
}

inline ExactComplex alpha1() { return {Rational(-16) / 5, Rational(-48) / 5}; }
inline ExactComplex nu_resonant() { return {Rational(64) / 5, Rational(0)}; }

}  // namespace reference

inline CrossCheckReport cross_check(const NormalFormDerivation& d) {
  CrossCheckReport r;
  auto check = [&r](const std::string& item, const auto& expected, const auto& computed) {
    ++r.checks;
    if (!(expected == computed)) r.mismatches.push_back({item, expected.str(), computed.str()});
  };

  const auto gp = reference::g_parts();
  for (std::size_t c = 0; c < 3; ++c) {
    for (int deg = 2; deg <= 3; ++deg) {
      check("g component " + std::to_string(c + 1) + " degree " + std::to_string(deg), gp[c][deg - 2],
            d.g[c].homogeneous_part(deg));
    }
  }

  const JetMap3 gc = jet_substitute(d.g, linear_jets(d.eigen.c, 3, eigen_labels()));
  const auto gcp = reference::g_of_c_parts();
  for (std::size_t c = 0; c < 3; ++c) {
    for (int deg = 2; deg <= 3; ++deg) {
      check("g(C zeta) component " + std::to_string(c + 1) + " degree " + std::to_string(deg), gcp[c][deg - 2],
            gc[c].homogeneous_part(deg));
    }
  }

  const auto g1 = reference::g1_terms();
  for (std::size_t c = 0; c < 3; ++c) check("g1 component " + std::to_string(c + 1), g1[c], d.g1[c]);

  const auto kt = reference::kill_table();
  const auto qs = reference::g2_quadratic_structure();
  const auto& exps = QuadraticKill::quadratic_exponents();
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t k = 0; k < 6; ++k) {
      check("kill " + QuadraticKill::name(t, k), kt[t][k], d.kill.table[t][k]);
      check("g2 quadratic constant for " + QuadraticKill::name(t, k), qs[t][k].first, d.g1[t].coeff(exps[k]));
      check("g2 quadratic multiplier for " + QuadraticKill::name(t, k), qs[t][k].second,
            -homological_divisor(exps[k], t, d.eigen.spectrum));
    }
  }

  check("alpha1", reference::alpha1(), d.result.alpha1);
  check("conj alpha1 (component 2)", reference::alpha1().conj(), d.result.alpha1_mirror);
  check("nu resonant", reference::nu_resonant(), d.result.nu_resonant);
  return r;
}

}  // namespace hypercycle
