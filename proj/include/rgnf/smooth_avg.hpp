#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgnf/expr.hpp"
#include "rgnf/spectra.hpp"

namespace rgnf {

using VectorFunction = std::function<CVector(std::span<const Complex>)>;

VectorFunction as_function(const expr::VectorFieldDef& vf, const expr::ParamValues& params = {});

inline constexpr int kDefaultSamples = 256;

/// The linear flow s ↦ e^{As} for purely imaginary eigenvalues λ_j = i ω_j
/// with ω_j = (rational) × base frequency, and its least common period T.
class PeriodicFlow {
 public:
  // Throws NonCommensurateFrequencies when A carries floating eigenvalues
  // (no exact period) unless allow_long_time_average is set, in which case
  // averages fall back to a 10^4·2π window and carry a warning.
  static PeriodicFlow from(const DiagLinearPart& A, int samples = kDefaultSamples,
                           double base_frequency = 1.0, bool allow_long_time_average = false);

  const DiagLinearPart& A() const { return A_; }
  int dim() const { return A_.dim(); }
  double period() const { return period_; }
  int samples() const { return samples_; }
  bool periodic() const { return periodic_; }
  const std::string& warning() const { return warning_; }
  // ω_j in units of the base frequency.
  const std::vector<double>& frequencies() const { return omega_; }

  // e^{As} x
  CVector flow(double s, std::span<const Complex> x) const;
  // e^{-As} g(e^{As} x)
  CVector flow_conjugate(const VectorFunction& g, double s, std::span<const Complex> x) const;

  PeriodicFlow with_samples(int samples) const;

 private:
  DiagLinearPart A_;
  std::vector<double> omega_;
  double base_ = 1.0;
  double period_ = 0.0;
  int samples_ = kDefaultSamples;
  bool periodic_ = true;
  std::string warning_;
};

/// Fourier coefficients of s ↦ e^{-As} g(e^{As} x) over one period.
struct FourierTable {
  double period = 0.0;
  std::vector<double> exponents;  // λ_n = 2πn/T, n = -(M/2-1) .. M/2-1
  std::vector<CVector> coeffs;    // c(λ_n, x), one vector per exponent
  double energy = 0.0;            // (1/M) Σ_k |f(s_k)|²
  double parseval_residual = 0.0;  // |Σ|c|² - energy| / energy over the kept modes
  int modes() const { return static_cast<int>(exponents.size()); }
  CVector mean() const;
};

FourierTable fourier_table(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x);

// P_K(g)(x): the mean c(0, x).
CVector average_PK(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x);
// QP_I(g)(x) = Σ_{λ≠0} c(λ, x) / (iλ).
CVector qpi_evaluate(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x);

nlohmann::json averaging_report(const PeriodicFlow& pf, const VectorFunction& g,
                                std::span<const Complex> x);

/// y ↦ Ay + ε P_K(g_1)(y).
class AveragedField {
 public:
  AveragedField(PeriodicFlow pf, VectorFunction g1) : pf_(std::move(pf)), g1_(std::move(g1)) {}
  const PeriodicFlow& flow() const { return pf_; }
  CVector eval(std::span<const Complex> y, double eps) const;
  CVector averaged(std::span<const Complex> y) const { return average_PK(pf_, g1_, y); }

 private:
  PeriodicFlow pf_;
  VectorFunction g1_;
};

AveragedField first_order_nf(const PeriodicFlow& pf, VectorFunction g1);

// ṙ and θ̇ contributions of a field value F at y = (r e^{iθ}, r e^{-iθ}).
struct PolarRates {
  double r_dot;
  double theta_dot;
};
PolarRates polar_rates(std::span<const Complex> y, std::span<const Complex> F);

/// R_2(y) = Dg_1·Q(g_1I) + g_2 - D(Q(g_1I))·g_1K at y, with Dg_1 by dual
/// numbers and D(Q(g_1I)) by central differences of step 1e-5·max(1, |y|).
CVector second_order_R2(const PeriodicFlow& pf, const expr::VectorFieldDef& g1,
                        const expr::VectorFieldDef* g2, std::span<const Complex> y,
                        const expr::ParamValues& params = {});

// P_K(R_2)(y), the ε² term of the C∞ normal form.
CVector second_order_term(const PeriodicFlow& pf, const expr::VectorFieldDef& g1,
                          const expr::VectorFieldDef* g2, std::span<const Complex> y,
                          const expr::ParamValues& params = {});

}  // namespace rgnf
