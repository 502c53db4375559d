#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgnf/polyvec.hpp"
#include "rgnf/rg_core.hpp"

namespace rgnf {

using State = CVector;
// dx/dt = f(t, x); states are complex so that diagonal coordinates and real
// systems share one integrator.
using Field = std::function<void(double t, std::span<const Complex> x, std::span<Complex> dx)>;

Field autonomous(std::function<CVector(std::span<const Complex>)> f);

enum class Method { dopri5, rk4 };

struct IntegratorOptions {
  Method method = Method::dopri5;
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks one from the field scale
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-14;
  double fixed_step = 1e-3;   // rk4 only; rounded so the span is hit exactly
  long max_steps = 50'000'000;
  // Output times; empty records every accepted step.
  std::vector<double> t_eval;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> x;
  std::string method;
  double step = 0.0;  // rk4 step, or the last accepted adaptive step
  double rtol = 0.0;
  double atol = 0.0;
  long steps = 0;

  std::string csv(bool complex_states) const;
};

Trajectory integrate(const Field& f, const State& x0, double t0, double t1,
                     const IntegratorOptions& opts = {});

/// Zero set of `value`, crossed in `direction` (+1: increasing, -1:
/// decreasing, 0: either), restricted to states where `accept` holds.
struct Section {
  std::string name;
  std::function<double(std::span<const Complex>)> value;
  int direction = 0;
  std::function<bool(std::span<const Complex>)> accept;
};

// x_j = 0 crossed downward with x_i > 0: the ray θ = 0 for a clockwise
// oscillator ẋ_i = x_j, ẋ_j = -x_i.
Section ray_section(int i = 0, int j = 1);

/// Radius coordinate on a section for a 2-D oscillator in real coordinates:
/// r = ‖(x_i, x_j)‖ / scale. scale = 2 reproduces r = |y_1| of the diagonal
/// coordinates x_1 = y_1 + y_2, x_2 = i(y_1 - y_2).
struct PolarChart {
  int i = 0;
  int j = 1;
  double scale = 2.0;
  int dim = 2;
  State point(double r) const;
  double radius(std::span<const Complex> x) const;
};

struct Crossing {
  double t;
  State x;
  double residual;  // |section value| at the refined state
};

inline IntegratorOptions tight_dopri5() {
  IntegratorOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-12;
  return o;
}

struct SectionOptions {
  IntegratorOptions integrator = tight_dopri5();
  double time_budget = 10.0 * 2.0 * 3.14159265358979323846;  // per return
  double residual_tol = 1e-10;
};

std::vector<Crossing> poincare_map(const Field& f, const Section& section, const State& x0,
                                   int n_returns, const SectionOptions& opts = {});

struct OrbitReport {
  std::string section;
  double r_star = 0.0;
  double mu = 0.0;
  std::string classification;  // "attracting" | "repelling" | "neutral"
  double residual = 0.0;       // |P(r*) - r*|
  double period = 0.0;
  double closure_error = 0.0;  // ‖x(period) - x(0)‖ after re-integration
  nlohmann::json to_json() const;
};

double return_map(const Field& f, const Section& section, const PolarChart& chart, double r,
                  const SectionOptions& opts = {}, double* return_time = nullptr);

OrbitReport find_periodic_orbit(const Field& f, const Section& section, const PolarChart& chart,
                                double r_lo, double r_hi, const SectionOptions& opts = {});

struct ScalingReport {
  int order = 0;
  std::vector<double> eps;
  std::vector<double> discrepancy;
  double slope = 0.0;
  bool roundoff_only = false;
  bool pass = false;
  nlohmann::json to_json() const;
};

// Least-squares slope of log E against log ε.
double fitted_slope(std::span<const double> eps, std::span<const double> err);

/// Integrates ẋ = Ax + Σ ε^k g_k(x) from x_0 = z_0 + Σ ε^k h_k(z_0) and the
/// order-m normal form from z_0 over t ∈ [0, 1] (fixed-step RK4), and
/// reports max_t ‖x(t) - (z(t) + Σ ε^k h_k(z(t)))‖ per ε. PASS when the
/// fitted slope lies in [m + 0.6, m + 1.4].
ScalingReport residual_scaling(const PerturbationSeries& ps, const NormalFormResult& nf, int m,
                               std::span<const double> eps_list, const State& z0,
                               double step = 1.0 / 4096.0);

}  // namespace rgnf
