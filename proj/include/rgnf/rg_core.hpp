#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rgnf/polyvec.hpp"
#include "rgnf/spectra.hpp"

namespace rgnf {

inline constexpr int kDefaultMaxOrder = 6;

/// ẋ = Ax + ε g_1(x) + ε² g_2(x) + ...; g[k-1] holds g_k.
class PerturbationSeries {
 public:
  PerturbationSeries(DiagLinearPart A, std::vector<PolyVF> g, int max_order = kDefaultMaxOrder);

  const DiagLinearPart& A() const { return A_; }
  int dim() const { return A_.dim(); }
  int max_order() const { return max_order_; }
  // g_k for k >= 1; the zero field past the supplied terms.
  PolyVF g(int k) const;
  const std::vector<PolyVF>& terms() const { return g_; }

 private:
  DiagLinearPart A_;
  std::vector<PolyVF> g_;
  int max_order_;
};

/// Table of the secular coefficients p^(i)_j, 1 <= j <= i <= order.
class SecularTable {
 public:
  SecularTable() = default;
  SecularTable(int dim, std::vector<std::vector<PolyVF>> rows);

  int order() const { return static_cast<int>(rows_.size()); }
  // Zero field for j > i.
  PolyVF at(int i, int j) const;

 private:
  int dim_ = 1;
  std::vector<std::vector<PolyVF>> rows_;  // rows_[i-1][j-1]
};

struct NormalFormResult {
  int order = 0;
  DiagLinearPart A;
  std::vector<PolyVF> Rk;      // R_1..R_m
  std::vector<PolyVF> PK_Rk;   // P_K(R_k)
  std::vector<PolyVF> QPI_Rk;  // Q P_I(R_k), the near-identity coefficients h_k
  SecularTable secular;
  std::optional<int> degree_cap;
};

/// ε^k coefficient of Σ_j ε^j g_j(x_0 + ε x_1 + ...), with
/// substitutions = [x_0, x_1, ..., x_{k-1}].
PolyVF extract_Gk(const PerturbationSeries& ps, std::span<const PolyVF> substitutions, int k,
                  std::optional<int> degree_cap = {});

/// Runs R_1 = g_1, R_k = G_k(y, QP_I R_1, ..., QP_I R_{k-1}) - Σ D(QP_I R_j) P_K R_{k-j}
/// up to order m and fills the projections and the secular table.
///
/// With degree_cap set every intermediate is truncated at that degree. Since
/// every g_k vanishes at the origin, products never lower the degree, so the
/// kept part is exact.
NormalFormResult compute_Rk(const PerturbationSeries& ps, int m, std::optional<int> degree_cap = {});

SecularTable secular_table(const NormalFormResult& nf);

/// x_i(t, y) = QP_I(R_i)(e^{At}y) + Σ_j p^(i)_j(e^{At}y) t^j.
struct SymbolicSolution {
  DiagLinearPart A;
  PolyVF initial;               // QP_I(R_i)
  std::vector<PolyVF> secular;  // secular[j-1] multiplies t^j

  CVector eval(double t, std::span<const Complex> y) const;
  // The same expression as a polynomial field in (z, t) = (e^{At}y, t); the
  // extra variable has index dim() and the extra component is zero.
  PolyVF time_lifted() const;
};

SymbolicSolution perturbation_solution(const NormalFormResult& nf, int i);

/// Residual of ẋ_i - A x_i - G_i(x_0, ..., x_{i-1}) expressed in (z, t); the
/// zero field when the symbolic solution satisfies the order-i equation.
PolyVF hierarchy_residual(const PerturbationSeries& ps, const NormalFormResult& nf, int i);

/// ż = Az + Σ_k ε^k P_K(R_k)(z).
class NormalForm {
 public:
  NormalForm(DiagLinearPart A, std::vector<PolyVF> terms);

  const DiagLinearPart& A() const { return A_; }
  const std::vector<PolyVF>& terms() const { return terms_; }
  int order() const { return static_cast<int>(terms_.size()); }
  CVector eval(std::span<const Complex> z, double eps) const;

 private:
  DiagLinearPart A_;
  std::vector<PolyVF> terms_;
  std::vector<CompiledField> compiled_;
};

NormalForm normal_form(const NormalFormResult& nf);

/// x = z + Σ_k ε^k QP_I(R_k)(z) with a numeric inverse.
class NearIdentity {
 public:
  explicit NearIdentity(std::vector<PolyVF> terms);

  const std::vector<PolyVF>& terms() const { return terms_; }
  CVector forward(std::span<const Complex> z, double eps) const;
  // Fixed-point iteration z <- x - Σ ε^k h_k(z) from z = x; throws
  // InversionDiverged if the step does not drop below step_tol within max_iter.
  CVector inverse(std::span<const Complex> x, double eps, double step_tol = 1e-13,
                  int max_iter = 100) const;

 private:
  std::vector<PolyVF> terms_;
  std::vector<CompiledField> compiled_;
};

NearIdentity near_identity(const NormalFormResult& nf);

}  // namespace rgnf
