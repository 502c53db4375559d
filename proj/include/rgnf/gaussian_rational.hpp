#pragma once

#include <complex>
#include <gmpxx.h>
#include <string>
#include <string_view>

namespace rgnf {

using Rational = mpq_class;

// Parses "p/q", "p" or a plain decimal such as "-0.125" exactly.
Rational parse_rational(std::string_view text);
// Always "p/q" with q > 0, e.g. "3/1", "0/1".
std::string rational_to_string(const Rational& r);

/// Exact complex rational re + i*im. GMP keeps both parts canonical
/// (positive denominators, lowest terms) after every operation.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value), im_(0) {}  // NOLINT
  GaussianRational(Rational re, Rational im = 0)
      : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {Rational(0), Rational(1)}; }
  static GaussianRational from_strings(std::string_view re, std::string_view im);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_imaginary() const { return sgn(re_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  // Human readable, e.g. "1/2", "-i/4", "(1/3 + 2i)".
  std::string to_string() const;
  std::string to_latex() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

}  // namespace rgnf
