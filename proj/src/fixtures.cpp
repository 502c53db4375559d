#include "rgnf/fixtures.hpp"

#include <cmath>

namespace rgnf::fixtures {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

DiagLinearPart oscillator_A() {
  return DiagLinearPart::exact({GaussianRational::i(), -GaussianRational::i()});
}

expr::VectorFieldDef example41_g1() {
  expr::ParseOptions o;
  o.dim = 2;
  return expr::parse("sin(x1 + x2)\nsin(x1 + x2)", o);
}

PerturbationSeries example41_series(int taylor_degree) {
  return PerturbationSeries(oscillator_A(), {expr::taylor(example41_g1(), taylor_degree)});
}

std::shared_ptr<const expr::MollifiedPiecewise> example42_sawtooth(double delta) {
  return std::make_shared<const expr::MollifiedPiecewise>(
      expr::MollifiedPiecewise::alternating(delta));
}

expr::VectorFieldDef example42_g1(double delta) {
  auto pw = example42_sawtooth(delta);
  auto arg = expr::binary(expr::Op::add, expr::variable(0), expr::variable(1));
  auto g = expr::mollified(arg, pw);
  expr::VectorFieldDef vf;
  vf.dim = 2;
  vf.components = {g, g};
  return vf;
}

Field example41_real(double eps) {
  return [eps](double, std::span<const Complex> x, std::span<Complex> dx) {
    dx[0] = x[1] + 2.0 * eps * std::sin(x[0]);
    dx[1] = -x[0];
  };
}

Field example42_real(double eps, double delta) {
  auto pw = example42_sawtooth(delta);
  return [eps, pw](double, std::span<const Complex> x, std::span<Complex> dx) {
    dx[0] = x[1] + 2.0 * eps * pw->value(x[0].real());
    dx[1] = -x[0];
  };
}

Field linear_focus(double d) {
  return [d](double, std::span<const Complex> x, std::span<Complex> dx) {
    dx[0] = x[1] - d * x[0];
    dx[1] = -x[0] - d * x[1];
  };
}

Section oscillator_section() { return ray_section(0, 1); }

PolarChart oscillator_chart() { return PolarChart{}; }

CVector to_diagonal(std::span<const Complex> x) {
  const Complex i(0.0, 1.0);
  return {0.5 * (x[0] - i * x[1]), 0.5 * (x[0] + i * x[1])};
}

CVector from_diagonal(std::span<const Complex> z) {
  const Complex i(0.0, 1.0);
  return {z[0] + z[1], i * (z[0] - z[1])};
}

double example42_R(double r, const expr::MollifiedPiecewise& g, int samples) {
  double h = kTwoPi / samples, acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    double t = k * h;
    acc += std::cos(t) * g.value(2.0 * r * std::cos(t));
  }
  return acc * h;
}

std::optional<double> example42_R_claimed(double r, double delta) {
  double n = std::floor(r);
  double frac = r - n;
  if (frac <= delta || frac >= 1.0 - delta) return std::nullopt;
  bool even = std::fmod(n, 2.0) == 0.0;
  return even ? kTwoPi * r : -kTwoPi * r;
}

}  // namespace rgnf::fixtures
