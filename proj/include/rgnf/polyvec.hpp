#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "rgnf/gaussian_rational.hpp"
#include "rgnf/multi_index.hpp"

namespace rgnf {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Scalar polynomial in `dim` variables with exact Gaussian-rational
/// coefficients. Zero coefficients are never stored.
class Poly {
 public:
  using TermMap = std::map<MultiIndex, GaussianRational>;

  explicit Poly(int dim = 1) : dim_(dim) {}

  static Poly constant(int dim, const GaussianRational& c);
  static Poly variable(int dim, int var);
  static Poly monomial(const MultiIndex& q, const GaussianRational& c);

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  // -1 for the zero polynomial.
  int degree() const;
  int min_degree() const;
  GaussianRational coefficient(const MultiIndex& q) const;

  void add_term(const MultiIndex& q, const GaussianRational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) { return a.scaled(GaussianRational(-1)); }
  friend Poly operator*(const Poly& a, const Poly& b) { return a.multiplied(b); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

  Poly scaled(const GaussianRational& c) const;
  // Product with every term of degree > degree_cap dropped.
  Poly multiplied(const Poly& o, std::optional<int> degree_cap = {}) const;
  Poly derivative(int var) const;
  Poly truncated(int degree) const;
  Poly widened(int dim) const;

  Complex eval(std::span<const Complex> x) const;

 private:
  int dim_;
  TermMap terms_;
};

/// One stored term of a polynomial vector field: coeff * x^exp * e_comp
/// (comp is zero-based).
struct FieldTerm {
  int comp;
  MultiIndex exp;
  GaussianRational coeff;
};

/// Polynomial vector field on C^n: a finite map (component, multi-index) ->
/// coefficient, kept in canonical form.
class PolyVF {
 public:
  explicit PolyVF(int dim = 1);
  explicit PolyVF(std::vector<Poly> components);

  // x -> x
  static PolyVF identity(int dim);
  // x -> B x for a dense n x n matrix given row-major.
  static PolyVF linear(int dim, std::span<const GaussianRational> matrix);
  static PolyVF monomial(int comp, const MultiIndex& q, const GaussianRational& c);

  int dim() const { return static_cast<int>(comps_.size()); }
  const Poly& component(int comp) const { return comps_.at(comp); }
  const std::vector<Poly>& components() const { return comps_; }

  void add_term(int comp, const MultiIndex& q, const GaussianRational& c);
  GaussianRational coefficient(int comp, const MultiIndex& q) const;

  // Terms sorted by (degree, exponent vector, component).
  std::vector<FieldTerm> terms() const;
  std::size_t size() const;
  bool is_zero() const;
  int degree() const;
  int min_degree() const;
  // True when no degree-0 term is stored (the field vanishes at the origin).
  bool is_constant_free() const;
  bool is_homogeneous(int degree) const;

  PolyVF& operator+=(const PolyVF& o);
  PolyVF& operator-=(const PolyVF& o);
  friend PolyVF operator+(PolyVF a, const PolyVF& b) { return a += b; }
  friend PolyVF operator-(PolyVF a, const PolyVF& b) { return a -= b; }
  friend PolyVF operator-(const PolyVF& a) { return a.scaled(GaussianRational(-1)); }
  friend bool operator==(const PolyVF& a, const PolyVF& b) { return a.comps_ == b.comps_; }
  friend bool operator!=(const PolyVF& a, const PolyVF& b) { return !(a == b); }

  PolyVF scaled(const GaussianRational& c) const;
  PolyVF truncated(int degree) const;
  // Embeds into `dim` >= dim(): extra variables unused, extra components zero.
  PolyVF widened(int dim) const;

  CVector eval(std::span<const Complex> x) const;

 private:
  std::vector<Poly> comps_;
};

/// Floating-point copy of a PolyVF for repeated evaluation in integrators.
class CompiledField {
 public:
  CompiledField() = default;
  explicit CompiledField(const PolyVF& f);

  int dim() const { return dim_; }
  void eval(std::span<const Complex> x, std::span<Complex> out) const;
  CVector operator()(std::span<const Complex> x) const;

 private:
  struct Term {
    int comp;
    std::array<std::uint16_t, kMaxDim> exps;
    Complex coeff;
  };
  int dim_ = 0;
  int max_exp_ = 0;
  std::vector<Term> terms_;
};

PolyVF add(const PolyVF& f, const PolyVF& g);

// (Df)(x) g(x); when degree_cap is set, terms above it are dropped.
PolyVF jacobian_apply(const PolyVF& f, const PolyVF& g, std::optional<int> degree_cap = {});

// [f, g] = Df g - Dg f
PolyVF lie_bracket(const PolyVF& f, const PolyVF& g, std::optional<int> degree_cap = {});

PolyVF truncate(const PolyVF& f, int degree);

/// ε-graded composition: with x(ε) = Σ_{j=0}^{order} ε^j series[j], returns
/// the coefficients of ε^0..ε^order in the expansion of f(x(ε)). Entries of
/// `series` beyond index `order` are ignored; missing entries count as zero.
std::vector<PolyVF> substitute(const PolyVF& f, std::span<const PolyVF> series, int order,
                               std::optional<int> degree_cap = {});

nlohmann::json to_json(const PolyVF& f);
PolyVF polyvf_from_json(const nlohmann::json& j);

}  // namespace rgnf
