#include "rgnf/gaussian_rational.hpp"

#include <cctype>

#include "rgnf/errors.hpp"

namespace rgnf {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string short_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

std::string latex_rational(const Rational& r, bool drop_unit) {
  Rational a = abs(r);
  std::string sign = sgn(r) < 0 ? "-" : "";
  if (a.get_den() == 1) {
    if (drop_unit && a == 1) return sign;
    return sign + a.get_num().get_str();
  }
  return sign + "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ConfigError("empty rational literal");

  bool negative = false;
  std::string body = s;
  if (body[0] == '-' || body[0] == '+') {
    negative = body[0] == '-';
    body = body.substr(1);
  }

  Rational value;
  auto slash = body.find('/');
  auto dot = body.find('.');
  if (slash != std::string::npos) {
    std::string p = body.substr(0, slash), q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw ConfigError("malformed rational '" + s + "'");
    mpz_class den(q);
    if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
    value = Rational(mpz_class(p), den);
  } else if (dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (fp.empty()) fp = "0";
    if (!all_digits(ip) || !all_digits(fp)) throw ConfigError("malformed decimal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    value = Rational(mpz_class(ip) * den + mpz_class(fp), den);
  } else {
    if (!all_digits(body)) throw ConfigError("malformed rational '" + s + "'");
    value = Rational(mpz_class(body));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string rational_to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

GaussianRational GaussianRational::from_strings(std::string_view re, std::string_view im) {
  return {parse_rational(re), parse_rational(im)};
}

GaussianRational GaussianRational::inverse() const {
  Rational n = norm2();
  if (sgn(n) == 0) throw DomainError("division by zero Gaussian rational");
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  return *this *= o.inverse();
}

std::string GaussianRational::to_string() const {
  if (is_real()) return short_rational(re_);
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = short_rational(im_) + "*i";
  if (is_imaginary()) return imag;
  std::string sep = sgn(im_) < 0 ? " - " : " + ";
  std::string mag = abs(im_) == 1 ? "i" : short_rational(abs(im_)) + "*i";
  return "(" + short_rational(re_) + sep + mag + ")";
}

std::string GaussianRational::to_latex() const {
  if (is_real()) return latex_rational(re_, false);
  if (is_imaginary()) {
    std::string m = latex_rational(im_, true);
    return m + "i";
  }
  std::string sep = sgn(im_) < 0 ? " - " : " + ";
  return "\\left(" + latex_rational(re_, false) + sep + latex_rational(abs(im_), true) + "i\\right)";
}

}  // namespace rgnf
