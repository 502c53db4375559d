#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rgnf/gaussian_rational.hpp"
#include "rgnf/polyvec.hpp"

namespace rgnf::expr {

/// C∞ function x ↦ s(x)·x where the slope s is piecewise constant with
/// jumps at `breakpoints`, blended across (b - δ, b + δ) by a C∞ step built
/// from exp(-1/u). Equal to the raw piecewise function outside those windows.
class MollifiedPiecewise {
 public:
  // slopes.size() == breakpoints.size() + 1; breakpoints strictly
  // increasing and at least 2δ apart.
  MollifiedPiecewise(std::vector<double> breakpoints, std::vector<double> slopes, double delta);

  // The odd function g(x) = x on [2n, 2n+1), -x on [2n+1, 2n+2), g(-x) = -g(x),
  // with breakpoints at ±1, ..., ±extent.
  static MollifiedPiecewise alternating(double delta, int extent = 64);

  double delta() const { return delta_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }

  double raw(double x) const;
  double value(double x) const;
  double derivative(double x) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  double delta_;
};

enum class Op { variable, parameter, literal, add, sub, mul, div, neg, pow, sin, cos, exp, mollipw };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  int index = 0;                 // variable (zero-based)
  std::string name;              // parameter
  GaussianRational value;        // literal
  int exponent = 0;              // pow
  std::vector<NodePtr> args;
  std::shared_ptr<const MollifiedPiecewise> piecewise;
};

NodePtr variable(int index);
NodePtr parameter(std::string name);
NodePtr literal(GaussianRational value);
NodePtr binary(Op op, NodePtr a, NodePtr b);
NodePtr unary(Op op, NodePtr a);
NodePtr power(NodePtr base, int exponent);
NodePtr mollified(NodePtr arg, std::shared_ptr<const MollifiedPiecewise> pw);

struct VectorFieldDef {
  int dim = 0;
  std::vector<NodePtr> components;
  bool fixed_point_at_origin = true;
};

struct ParseOptions {
  // Declared dimension; 0 takes the number of components.
  int dim = 0;
  std::set<std::string> parameters;
  double mollifier_delta = 0.05;
  int mollifier_extent = 64;
};

using ParamValues = std::map<std::string, Complex>;
using ExactParams = std::map<std::string, GaussianRational>;

/// One component per line (or separated by ';'). Grammar:
///   expr := term (('+'|'-') term)*
///   term := unary (('*'|'/') unary)*
///   unary := '-' unary | factor
///   factor := base ('^' uint)?
///   base := number | ident | '(' expr ')' | func '(' expr ')'
/// with numbers written as decimals or p/q, identifiers x1..xn, declared
/// parameters, and 'I' for the imaginary unit.
VectorFieldDef parse(const std::string& src, const ParseOptions& options = {});
NodePtr parse_expression(const std::string& src, const ParseOptions& options = {});

// Expression tree of an exact polynomial field.
VectorFieldDef from_polyvf(const PolyVF& f);

Complex eval(const NodePtr& e, std::span<const Complex> x, const ParamValues& params = {});
CVector eval(const VectorFieldDef& vf, std::span<const Complex> x, const ParamValues& params = {});

// Directional derivative D f(x)·v by dual numbers.
CVector forward_derivative(const VectorFieldDef& vf, std::span<const Complex> x,
                           std::span<const Complex> direction, const ParamValues& params = {});

// Throws DomainError unless every component vanishes at the origin (1e-14).
void check_fixed_point(const VectorFieldDef& vf, const ParamValues& params = {});

/// Exact Taylor polynomial at the origin up to total degree `degree`.
/// Throws NotAnalyticAtOrigin for mollified pieces.
PolyVF taylor(const VectorFieldDef& vf, int degree, const ExactParams& params = {});

}  // namespace rgnf::expr
