#pragma once

#include <memory>
#include <optional>

#include "rgnf/dynamics.hpp"
#include "rgnf/expr.hpp"
#include "rgnf/rg_core.hpp"
#include "rgnf/spectra.hpp"

// The two oscillator fixtures: ẋ1 = x2 + 2ε g(x1), ẋ2 = -x1 with g = sin
// (example41) or the mollified sawtooth g̃ (example42). In diagonal
// coordinates x1 = z1 + z2, x2 = i(z1 - z2) both become
// ż = diag(i, -i) z + ε (g(z1 + z2), g(z1 + z2)).
namespace rgnf::fixtures {

inline constexpr double kDefaultDelta = 0.05;

DiagLinearPart oscillator_A();

expr::VectorFieldDef example41_g1();
PerturbationSeries example41_series(int taylor_degree);

std::shared_ptr<const expr::MollifiedPiecewise> example42_sawtooth(double delta = kDefaultDelta);
expr::VectorFieldDef example42_g1(double delta = kDefaultDelta);

Field example41_real(double eps);
Field example42_real(double eps, double delta = kDefaultDelta);
// ẋ1 = x2 - d x1, ẋ2 = -x1 - d x2
Field linear_focus(double d);

Section oscillator_section();
PolarChart oscillator_chart();

// (x1, x2) -> (z1, z2) and back.
CVector to_diagonal(std::span<const Complex> x);
CVector from_diagonal(std::span<const Complex> z);

/// R(r) = ∫_0^{2π} cos t · g̃(2r cos t) dt by the composite trapezoid rule.
double example42_R(double r, const expr::MollifiedPiecewise& g, int samples = 1 << 14);

// The closed form ±2πr claimed away from the windows (2n ± δ, 2n+1 ± δ);
// empty inside them.
std::optional<double> example42_R_claimed(double r, double delta);

}  // namespace rgnf::fixtures
