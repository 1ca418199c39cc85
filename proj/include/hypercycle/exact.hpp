#pragma once

// Complex numbers with arbitrary-precision rational parts.

#include <complex>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hypercycle {

using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(long v) : re_(v) {}  // NOLINT: integer literals are ubiquitous in the tables
  ExactComplex(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}  // NOLINT

  static ExactComplex i() { return {Rational(0), Rational(1)}; }
  static ExactComplex ratio(long num, long den, long inum = 0, long iden = 1) {
    return {Rational(num) / den, Rational(inum) / iden};
  }

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  ExactComplex conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  ExactComplex operator-() const { return {-re_, -im_}; }
  ExactComplex& operator+=(const ExactComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o) {
    const Rational n = o.norm();
    if (n == 0) throw std::domain_error("division by exact zero");
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
  }

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re_), static_cast<double>(im_)};
  }

  /// "a", "bi", "a+bi" or "a-bi" with rational a, b in lowest terms.
  std::string str() const {
    if (im_ == 0) return to_string(re_);
    std::string imag;
    const Rational mag = im_ < 0 ? Rational(-im_) : im_;
    imag = (mag == 1 ? std::string() : to_string(mag)) + "i";
    if (re_ == 0) return (im_ < 0 ? "-" : "") + imag;
    return to_string(re_) + (im_ < 0 ? "-" : "+") + imag;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline std::ostream& operator<<(std::ostream& os, const ExactComplex& c) { return os << c.str(); }

}  // namespace hypercycle
