#include "rgnf/smooth_avg.hpp"

#include <cmath>
#include <fftw3.h>
#include <map>
#include <mutex>
#include <numbers>

#include "rgnf/errors.hpp"

namespace rgnf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plans are created under a lock and reused; execution with the
// new-array interface is thread safe.
fftw_plan forward_plan(int n) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  std::vector<Complex> in(n), out(n);
  fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(n, p);
  return p;
}

void dft(std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_execute_dft(forward_plan(static_cast<int>(in.size())),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_dim(const PeriodicFlow& pf, std::size_t n) {
  if (static_cast<int>(n) != pf.dim())
    throw DimensionMismatch("point dimension " + std::to_string(n) + " differs from A (" +
                            std::to_string(pf.dim()) + ")");
}

// Mean over [0, window] by the midpoint rule, for the non-periodic fallback.
CVector long_time_mean(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x) {
  const double window = 1e4 * kTwoPi;
  const long n = static_cast<long>(pf.samples()) * 10000L;
  CVector acc(x.size());
  for (long k = 0; k < n; ++k) {
    double s = (k + 0.5) * window / static_cast<double>(n);
    CVector v = pf.flow_conjugate(g, s, x);
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += v[c];
  }
  for (auto& a : acc) a /= static_cast<double>(n);
  return acc;
}

}  // namespace

VectorFunction as_function(const expr::VectorFieldDef& vf, const expr::ParamValues& params) {
  return [vf, params](std::span<const Complex> x) { return expr::eval(vf, x, params); };
}

// ---------------------------------------------------------------- flow

PeriodicFlow PeriodicFlow::from(const DiagLinearPart& A, int samples, double base_frequency,
                                bool allow_long_time_average) {
  if (!is_power_of_two(samples) || samples < 4)
    throw DomainError("sample count must be a power of two >= 4");
  if (!(base_frequency > 0.0)) throw DomainError("base frequency must be positive");
  PeriodicFlow pf;
  pf.A_ = A;
  pf.samples_ = samples;
  pf.base_ = base_frequency;

  for (const auto& l : A.eigenvalues()) {
    if (std::abs(l.real()) > (A.is_exact() ? 0.0 : A.tolerance()))
      throw DomainError("averaging needs purely imaginary eigenvalues");
    pf.omega_.push_back(l.imag());
  }

  if (!A.is_exact()) {
    if (!allow_long_time_average)
      throw NonCommensurateFrequencies(
          "floating eigenvalues carry no exact common period; give ω_j as exact rationals "
          "(times one base frequency) or enable the long-time-average fallback");
    pf.periodic_ = false;
    pf.period_ = 1e4 * kTwoPi;
    pf.warning_ = "long-time average over a 10^4*2pi window; frequencies not known to be commensurate";
    return pf;
  }

  // Least u > 0 with u·ω_j ∈ Z for all j: u = lcm(den) / gcd(num).
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& l : A.exact_eigenvalues()) {
    if (!l.is_imaginary()) throw DomainError("averaging needs purely imaginary eigenvalues");
    const Rational& w = l.im();
    if (sgn(w) == 0) continue;
    mpz_class n = abs(w.get_num());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), w.get_den().get_mpz_t());
  }
  Rational u = num_gcd == 0 ? Rational(1) : Rational(den_lcm, num_gcd);
  pf.period_ = kTwoPi * u.get_d() / base_frequency;
  return pf;
}

CVector PeriodicFlow::flow(double s, std::span<const Complex> x) const {
  require_dim(*this, x.size());
  CVector out(x.size());
  for (std::size_t v = 0; v < x.size(); ++v)
    out[v] = std::polar(1.0, omega_[v] * base_ * s) * x[v];
  return out;
}

CVector PeriodicFlow::flow_conjugate(const VectorFunction& g, double s,
                                     std::span<const Complex> x) const {
  CVector gx = g(flow(s, x));
  if (gx.size() != x.size()) throw DimensionMismatch("field dimension differs from A");
  for (std::size_t v = 0; v < gx.size(); ++v) gx[v] *= std::polar(1.0, -omega_[v] * base_ * s);
  return gx;
}

PeriodicFlow PeriodicFlow::with_samples(int samples) const {
  if (!is_power_of_two(samples) || samples < 4)
    throw DomainError("sample count must be a power of two >= 4");
  PeriodicFlow pf = *this;
  pf.samples_ = samples;
  return pf;
}

// ---------------------------------------------------------------- Fourier

CVector FourierTable::mean() const {
  for (int n = 0; n < modes(); ++n)
    if (exponents[n] == 0.0) return coeffs[n];
  return {};
}

FourierTable fourier_table(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x) {
  require_dim(pf, x.size());
  if (!pf.periodic())
    throw NonCommensurateFrequencies("Fourier table requires a periodic linear flow");
  const int M = pf.samples();
  const int n = pf.dim();
  const double T = pf.period();

  std::vector<std::vector<Complex>> signal(n, std::vector<Complex>(M));
  double energy = 0.0;
  for (int k = 0; k < M; ++k) {
    CVector v = pf.flow_conjugate(g, T * k / M, x);
    for (int c = 0; c < n; ++c) {
      if (!std::isfinite(v[c].real()) || !std::isfinite(v[c].imag()))
        throw NonFiniteState("non-finite field value while sampling the flow");
      signal[c][k] = v[c];
      energy += std::norm(v[c]);
    }
  }
  energy /= M;

  FourierTable tab;
  tab.period = T;
  tab.energy = energy;
  const int half = M / 2;
  std::vector<std::vector<Complex>> spec(n, std::vector<Complex>(M));
  for (int c = 0; c < n; ++c) dft(signal[c], spec[c]);

  double kept = 0.0;
  for (int m = -(half - 1); m <= half - 1; ++m) {
    int idx = m >= 0 ? m : m + M;
    CVector coeff(n);
    for (int c = 0; c < n; ++c) {
      coeff[c] = spec[c][idx] / static_cast<double>(M);
      kept += std::norm(coeff[c]);
    }
    tab.exponents.push_back(kTwoPi * m / T);
    tab.coeffs.push_back(std::move(coeff));
  }
  tab.parseval_residual = energy > 0.0 ? std::abs(kept - energy) / energy : std::abs(kept);
  return tab;
}

CVector average_PK(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x) {
  require_dim(pf, x.size());
  if (!pf.periodic()) return long_time_mean(pf, g, x);
  return fourier_table(pf, g, x).mean();
}

CVector qpi_evaluate(const PeriodicFlow& pf, const VectorFunction& g, std::span<const Complex> x) {
  FourierTable tab = fourier_table(pf, g, x);
  CVector out(x.size());
  const Complex i(0.0, 1.0);
  for (int m = 0; m < tab.modes(); ++m) {
    if (tab.exponents[m] == 0.0) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += tab.coeffs[m][c] / (i * tab.exponents[m]);
  }
  return out;
}

nlohmann::json averaging_report(const PeriodicFlow& pf, const VectorFunction& g,
                                std::span<const Complex> x) {
  nlohmann::json point = nlohmann::json::array(), pk = nlohmann::json::array();
  for (const auto& v : x) point.push_back({v.real(), v.imag()});
  nlohmann::json out;
  if (pf.periodic()) {
    FourierTable tab = fourier_table(pf, g, x);
    for (const auto& v : tab.mean()) pk.push_back({v.real(), v.imag()});
    out = {{"point", point},
           {"PK", pk},
           {"mode_count", tab.modes()},
           {"parseval_residual", tab.parseval_residual},
           {"period", tab.period}};
  } else {
    for (const auto& v : average_PK(pf, g, x)) pk.push_back({v.real(), v.imag()});
    out = {{"point", point}, {"PK", pk}, {"mode_count", 0}, {"parseval_residual", nullptr},
           {"period", nullptr}, {"warning", pf.warning()}};
  }
  return out;
}

// ---------------------------------------------------------------- normal forms

CVector AveragedField::eval(std::span<const Complex> y, double eps) const {
  CVector out = averaged(y);
  const auto& lam = pf_.A().eigenvalues();
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = lam[v] * y[v] + eps * out[v];
  return out;
}

AveragedField first_order_nf(const PeriodicFlow& pf, VectorFunction g1) {
  return AveragedField(pf, std::move(g1));
}

PolarRates polar_rates(std::span<const Complex> y, std::span<const Complex> F) {
  if (y.size() < 1 || F.size() < 1) throw DimensionMismatch("polar_rates needs a 2-D pair");
  double r = std::abs(y[0]);
  if (r == 0.0) throw DomainError("polar_rates at r = 0");
  Complex rot = std::conj(y[0]) / r;  // e^{-iθ}
  Complex w = rot * F[0];
  return {w.real(), w.imag() / r};
}

CVector second_order_R2(const PeriodicFlow& pf, const expr::VectorFieldDef& g1,
                        const expr::VectorFieldDef* g2, std::span<const Complex> y,
                        const expr::ParamValues& params) {
  require_dim(pf, y.size());
  VectorFunction g1f = as_function(g1, params);
  CVector q = qpi_evaluate(pf, g1f, y);
  CVector pk = average_PK(pf, g1f, y);

  CVector out = expr::forward_derivative(g1, y, q, params);
  if (g2) {
    CVector v = expr::eval(*g2, y, params);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += v[c];
  }

  double norm = 0.0;
  for (const auto& v : y) norm += std::norm(v);
  const double h = 1e-5 * std::max(1.0, std::sqrt(norm));
  CVector yp(y.begin(), y.end()), ym(y.begin(), y.end());
  for (std::size_t c = 0; c < y.size(); ++c) {
    yp[c] += h * pk[c];
    ym[c] -= h * pk[c];
  }
  CVector qp = qpi_evaluate(pf, g1f, yp), qm = qpi_evaluate(pf, g1f, ym);
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] -= (qp[c] - qm[c]) / (2.0 * h);
    if (!std::isfinite(out[c].real()) || !std::isfinite(out[c].imag()))
      throw NumericError("second_order_R2: finite-difference step failed (non-finite result)");
  }
  return out;
}

CVector second_order_term(const PeriodicFlow& pf, const expr::VectorFieldDef& g1,
                          const expr::VectorFieldDef* g2, std::span<const Complex> y,
                          const expr::ParamValues& params) {
  VectorFunction r2 = [&](std::span<const Complex> x) {
    return second_order_R2(pf, g1, g2, x, params);
  };
  return average_PK(pf, r2, y);
}

}  // namespace rgnf
