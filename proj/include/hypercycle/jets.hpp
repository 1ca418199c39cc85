#pragma once

// Truncated polynomials in three variables over ExactComplex.
//
// A Jet3 stores the coefficients of monomials x^a y^b z^c with a+b+c <= D, the
// degree bound. Every product or substitution is truncated at D, so a Jet3 is
// the D-jet at the origin of whatever it represents.

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypercycle/errors.hpp"
#include "hypercycle/exact.hpp"

namespace hypercycle {

using Exponent = std::array<int, 3>;
using Labels = std::array<std::string, 3>;

inline const Labels& default_labels() {
  static const Labels l{"x", "y", "z"};
  return l;
}

constexpr int total_degree(const Exponent& e) { return e[0] + e[1] + e[2]; }

/// All exponents of total degree exactly d, in descending lexicographic order
/// (x^d first).
inline std::vector<Exponent> monomials_of_degree(int d) {
  std::vector<Exponent> out;
  for (int a = d; a >= 0; --a) {
    for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
  }
  return out;
}

class Jet3 {
 public:
  explicit Jet3(int degree_bound = 3, Labels labels = default_labels())
      : bound_(degree_bound), labels_(std::move(labels)) {
    if (bound_ < 0) throw BadJetShape("negative degree bound");
  }

  static Jet3 constant(const ExactComplex& c, int bound, Labels labels = default_labels()) {
    return monomial(c, {0, 0, 0}, bound, std::move(labels));
  }
  static Jet3 variable(int index, int bound, Labels labels = default_labels()) {
    Exponent e{0, 0, 0};
    e.at(static_cast<std::size_t>(index)) = 1;
    return monomial(ExactComplex(1), e, bound, std::move(labels));
  }
  static Jet3 monomial(const ExactComplex& c, const Exponent& e, int bound, Labels labels = default_labels()) {
    Jet3 j(bound, std::move(labels));
    j.set(e, c);
    return j;
  }

  int degree_bound() const noexcept { return bound_; }
  const Labels& labels() const noexcept { return labels_; }
  Jet3 with_labels(Labels labels) const {
    Jet3 j = *this;
    j.labels_ = std::move(labels);
    return j;
  }

  const std::map<Exponent, ExactComplex>& terms() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  ExactComplex coeff(const Exponent& e) const {
    check_exponent(e);
    const auto it = coeffs_.find(e);
    return it == coeffs_.end() ? ExactComplex() : it->second;
  }

  void set(const Exponent& e, const ExactComplex& c) {
    check_exponent(e);
    if (c.is_zero()) {
      coeffs_.erase(e);
    } else {
      coeffs_[e] = c;
    }
  }

  // Adds c to the coefficient of e; terms above the bound are dropped.
  void accumulate(const Exponent& e, const ExactComplex& c) {
    if (total_degree(e) > bound_ || c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  /// Lowest total degree present, or -1 for the zero jet.
  int lowest_degree() const {
    int d = -1;
    for (const auto& [e, c] : coeffs_) {
      if (d < 0 || total_degree(e) < d) d = total_degree(e);
    }
    return d;
  }

  Jet3 homogeneous_part(int d) const {
    Jet3 j(bound_, labels_);
    for (const auto& [e, c] : coeffs_) {
      if (total_degree(e) == d) j.coeffs_.emplace(e, c);
    }
    return j;
  }

  // Drops terms of total degree above d; the degree bound is unchanged.
  Jet3 truncated(int d) const {
    Jet3 j(bound_, labels_);
    for (const auto& [e, c] : coeffs_) {
      if (total_degree(e) <= d) j.coeffs_.emplace(e, c);
    }
    return j;
  }

  Jet3 derivative(int var) const {
    const auto v = static_cast<std::size_t>(var);
    Jet3 j(bound_, labels_);
    for (const auto& [e, c] : coeffs_) {
      if (e[v] == 0) continue;
      Exponent f = e;
      f[v] -= 1;
      j.accumulate(f, c * ExactComplex(static_cast<long>(e[v])));
    }
    return j;
  }

  Jet3 conj() const {
    Jet3 j(bound_, labels_);
    for (const auto& [e, c] : coeffs_) j.coeffs_.emplace(e, c.conj());
    return j;
  }

  Jet3 operator-() const {
    Jet3 j(bound_, labels_);
    for (const auto& [e, c] : coeffs_) j.coeffs_.emplace(e, -c);
    return j;
  }
  Jet3& operator+=(const Jet3& o) {
    check_bound(o);
    for (const auto& [e, c] : o.coeffs_) accumulate(e, c);
    return *this;
  }
  Jet3& operator-=(const Jet3& o) {
    check_bound(o);
    for (const auto& [e, c] : o.coeffs_) accumulate(e, -c);
    return *this;
  }
  Jet3& operator*=(const ExactComplex& s) {
    if (s.is_zero()) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [e, c] : coeffs_) c *= s;
    return *this;
  }

  friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
  friend Jet3 operator*(Jet3 a, const ExactComplex& s) { return a *= s; }
  friend Jet3 operator*(const ExactComplex& s, Jet3 a) { return a *= s; }

  // Labels are presentation only and do not take part in equality.
  friend bool operator==(const Jet3& a, const Jet3& b) { return a.bound_ == b.bound_ && a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Jet3& a, const Jet3& b) { return !(a == b); }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int d = 0; d <= bound_; ++d) {
      for (const auto& e : monomials_of_degree(d)) {
        const auto it = coeffs_.find(e);
        if (it == coeffs_.end()) continue;
        const ExactComplex& c = it->second;
        std::string cs = c.str();
        const bool compound = !c.is_real() && c.re() != 0;
        bool negative = false;
        if (!compound && cs.front() == '-') {
          negative = true;
          cs.erase(0, 1);
        }
        if (compound) cs = "(" + cs + ")";
        os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
        first = false;
        std::string mono;
        for (std::size_t v = 0; v < 3; ++v) {
          if (e[v] == 0) continue;
          if (!mono.empty()) mono += "*";
          mono += labels_[v];
          if (e[v] > 1) mono += "^" + std::to_string(e[v]);
        }
        if (mono.empty()) {
          os << cs;
        } else if (cs == "1") {
          os << mono;
        } else {
          os << cs << "*" << mono;
        }
      }
    }
    return os.str();
  }

 private:
  void check_exponent(const Exponent& e) const {
    if (e[0] < 0 || e[1] < 0 || e[2] < 0) throw OutOfDegree("negative exponent");
    if (total_degree(e) > bound_) {
      throw OutOfDegree("monomial of degree " + std::to_string(total_degree(e)) + " exceeds bound " +
                        std::to_string(bound_));
    }
  }
  void check_bound(const Jet3& o) const {
    if (o.bound_ != bound_) throw DegreeMismatch("jets have different degree bounds");
  }

  int bound_;
  Labels labels_;
  std::map<Exponent, ExactComplex> coeffs_;
};

inline Jet3 jet_mul(const Jet3& a, const Jet3& b) {
  if (a.degree_bound() != b.degree_bound()) throw DegreeMismatch("jets have different degree bounds");
  Jet3 out(a.degree_bound(), a.labels());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      const Exponent e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
      if (total_degree(e) <= a.degree_bound()) out.accumulate(e, ca * cb);
    }
  }
  return out;
}

inline Jet3 operator*(const Jet3& a, const Jet3& b) { return jet_mul(a, b); }

inline Jet3 jet_pow(const Jet3& a, int n) {
  Jet3 r = Jet3::constant(ExactComplex(1), a.degree_bound(), a.labels());
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

/// 1/a via the Neumann series c^{-1} sum_n (-(a - c)/c)^n; needs a(0) = c != 0.
inline Jet3 jet_reciprocal(const Jet3& a) {
  const ExactComplex c = a.coeff({0, 0, 0});
  if (c.is_zero()) throw BadJetShape("reciprocal of a jet with zero constant term");
  const ExactComplex inv_c = ExactComplex(1) / c;
  Jet3 t = (a - Jet3::constant(c, a.degree_bound(), a.labels())) * (-inv_c);
  Jet3 sum = Jet3::constant(ExactComplex(1), a.degree_bound(), a.labels());
  Jet3 power = sum;
  for (int n = 1; n <= a.degree_bound(); ++n) {
    power = power * t;
    sum += power;
  }
  return sum * inv_c;
}

/// Three Jet3 components sharing one degree bound.
class JetMap3 {
 public:
  explicit JetMap3(int bound = 3, Labels labels = default_labels())
      : c_{Jet3(bound, labels), Jet3(bound, labels), Jet3(bound, labels)} {}
  JetMap3(Jet3 a, Jet3 b, Jet3 c) : c_{std::move(a), std::move(b), std::move(c)} {
    if (c_[1].degree_bound() != c_[0].degree_bound() || c_[2].degree_bound() != c_[0].degree_bound()) {
      throw DegreeMismatch("JetMap3 components must share a degree bound");
    }
  }

  static JetMap3 identity(int bound, const Labels& labels = default_labels()) {
    return {Jet3::variable(0, bound, labels), Jet3::variable(1, bound, labels), Jet3::variable(2, bound, labels)};
  }

  int degree_bound() const noexcept { return c_[0].degree_bound(); }
  const Jet3& operator[](std::size_t i) const { return c_.at(i); }
  Jet3& operator[](std::size_t i) { return c_.at(i); }

  JetMap3 homogeneous_part(int d) const {
    return {c_[0].homogeneous_part(d), c_[1].homogeneous_part(d), c_[2].homogeneous_part(d)};
  }
  JetMap3 with_labels(const Labels& l) const {
    return {c_[0].with_labels(l), c_[1].with_labels(l), c_[2].with_labels(l)};
  }

  friend JetMap3 operator+(const JetMap3& a, const JetMap3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
  friend JetMap3 operator-(const JetMap3& a, const JetMap3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
  friend bool operator==(const JetMap3& a, const JetMap3& b) { return a.c_ == b.c_; }
  friend bool operator!=(const JetMap3& a, const JetMap3& b) { return !(a == b); }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < 3; ++i) os << "[" << i + 1 << "] " << c_[i].str() << "\n";
    return os.str();
  }

 private:
  std::array<Jet3, 3> c_;
};

/// Exact 3x3 matrix.
struct LinearMap3 {
  std::array<std::array<ExactComplex, 3>, 3> a{};

  static LinearMap3 identity() { return diag(ExactComplex(1), ExactComplex(1), ExactComplex(1)); }
  static LinearMap3 diag(const ExactComplex& d0, const ExactComplex& d1, const ExactComplex& d2) {
    LinearMap3 m;
    m.a[0][0] = d0;
    m.a[1][1] = d1;
    m.a[2][2] = d2;
    return m;
  }

  const ExactComplex& operator()(std::size_t r, std::size_t c) const { return a.at(r).at(c); }
  ExactComplex& operator()(std::size_t r, std::size_t c) { return a.at(r).at(c); }

  std::array<ExactComplex, 3> column(std::size_t c) const { return {a[0][c], a[1][c], a[2][c]}; }

  friend LinearMap3 operator*(const LinearMap3& x, const LinearMap3& y) {
    LinearMap3 m;
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        ExactComplex s;
        for (std::size_t k = 0; k < 3; ++k) s += x.a[r][k] * y.a[k][c];
        m.a[r][c] = s;
      }
    }
    return m;
  }
  friend LinearMap3 operator*(const ExactComplex& s, LinearMap3 m) {
    for (auto& row : m.a) {
      for (auto& v : row) v *= s;
    }
    return m;
  }
  friend bool operator==(const LinearMap3& x, const LinearMap3& y) { return x.a == y.a; }
  friend bool operator!=(const LinearMap3& x, const LinearMap3& y) { return !(x == y); }
};

/// Linear part of a jet map as a matrix: entry (i, j) is d m_i / d x_j at 0.
inline LinearMap3 linear_part(const JetMap3& m) {
  LinearMap3 l;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      Exponent e{0, 0, 0};
      e[j] = 1;
      l.a[i][j] = m[i].coeff(e);
    }
  }
  return l;
}

/// The linear map x -> A x written as jets in the variables `labels`.
inline JetMap3 linear_jets(const LinearMap3& a, int bound, const Labels& labels = default_labels()) {
  JetMap3 m(bound, labels);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      Exponent e{0, 0, 0};
      e[j] = 1;
      m[i].set(e, a.a[i][j]);
    }
  }
  return m;
}

/// Pointwise A * m.
inline JetMap3 apply_linear(const LinearMap3& a, const JetMap3& m) {
  JetMap3 out(m.degree_bound(), m[0].labels());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out[i] += m[j] * a.a[i][j];
  }
  return out;
}

/// p(m_1(x), m_2(x), m_3(x)) truncated at the common degree bound.
inline Jet3 jet_substitute(const Jet3& p, const JetMap3& m) {
  const int bound = p.degree_bound();
  if (m.degree_bound() != bound) throw DegreeMismatch("substitution with different degree bounds");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!m[i].coeff({0, 0, 0}).is_zero()) throw NonzeroConstantTerm("substituted jets must vanish at the origin");
  }
  // powers[v][n] = m_v^n
  std::array<std::vector<Jet3>, 3> powers;
  for (std::size_t v = 0; v < 3; ++v) {
    powers[v].push_back(Jet3::constant(ExactComplex(1), bound, m[v].labels()));
    for (int n = 1; n <= bound; ++n) powers[v].push_back(powers[v].back() * m[v]);
  }
  Jet3 out(bound, m[0].labels());
  for (const auto& [e, c] : p.terms()) {
    Jet3 term = powers[0][static_cast<std::size_t>(e[0])] * powers[1][static_cast<std::size_t>(e[1])];
    term = term * powers[2][static_cast<std::size_t>(e[2])];
    out += term * c;
  }
  return out;
}

inline JetMap3 jet_substitute(const JetMap3& p, const JetMap3& m) {
  return {jet_substitute(p[0], m), jet_substitute(p[1], m), jet_substitute(p[2], m)};
}

/// C^{-1} m(C x). Cinv * C must be the identity exactly.
inline JetMap3 linear_conjugate(const JetMap3& m, const LinearMap3& c, const LinearMap3& cinv,
                                const Labels& labels = default_labels()) {
  if (cinv * c != LinearMap3::identity()) throw NotInverse("Cinv * C is not the identity");
  return apply_linear(cinv, jet_substitute(m, linear_jets(c, m.degree_bound(), labels)));
}

using JetMatrix3 = std::array<std::array<Jet3, 3>, 3>;

inline JetMatrix3 identity_matrix(int bound, const Labels& labels = default_labels()) {
  JetMatrix3 m{{{Jet3(bound, labels), Jet3(bound, labels), Jet3(bound, labels)},
                {Jet3(bound, labels), Jet3(bound, labels), Jet3(bound, labels)},
                {Jet3(bound, labels), Jet3(bound, labels), Jet3(bound, labels)}}};
  for (std::size_t i = 0; i < 3; ++i) m[i][i] = Jet3::constant(ExactComplex(1), bound, labels);
  return m;
}

/// Entry (i, j) = d m_i / d x_j.
inline JetMatrix3 jet_jacobian(const JetMap3& m) {
  JetMatrix3 j = identity_matrix(m.degree_bound(), m[0].labels());
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) j[r][c] = m[r].derivative(static_cast<int>(c));
  }
  return j;
}

inline JetMatrix3 matmul(const JetMatrix3& a, const JetMatrix3& b) {
  JetMatrix3 out = identity_matrix(a[0][0].degree_bound(), a[0][0].labels());
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      Jet3 s(a[0][0].degree_bound(), a[0][0].labels());
      for (std::size_t k = 0; k < 3; ++k) s += a[r][k] * b[k][c];
      out[r][c] = s;
    }
  }
  return out;
}

inline JetMap3 apply(const JetMatrix3& a, const JetMap3& v) {
  JetMap3 out(v.degree_bound(), v[0].labels());
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t k = 0; k < 3; ++k) out[r] += a[r][k] * v[k];
  }
  return out;
}

/// Id - Dh~ + (Dh~)^2, truncated at degree D-1: the part of Dh^{-1} that
/// matters for D-jets when h = id + h~ and h~ starts at degree 2.
inline JetMatrix3 truncated_inverse_jacobian(const JetMap3& htilde) {
  for (std::size_t i = 0; i < 3; ++i) {
    const int low = htilde[i].lowest_degree();
    if (low >= 0 && low < 2) throw BadJetShape("h~ must have no constant or linear part");
  }
  const int bound = htilde.degree_bound();
  const JetMatrix3 d = jet_jacobian(htilde);
  const JetMatrix3 d2 = matmul(d, d);
  JetMatrix3 out = identity_matrix(bound, htilde[0].labels());
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) out[r][c] = (out[r][c] - d[r][c] + d2[r][c]).truncated(bound - 1);
  }
  return out;
}

}  // namespace hypercycle
