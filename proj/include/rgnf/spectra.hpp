#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgnf/polyvec.hpp"

namespace rgnf {

/// The diagonal linear part A = diag(λ_1, ..., λ_n).
///
/// Exact mode stores Gaussian-rational eigenvalues and decides resonance
/// with no tolerance. Numeric mode stores complex floats together with a
/// tolerance τ; it supports classification and projections only, never the
/// exact operators L_A and Q.
class DiagLinearPart {
 public:
  static DiagLinearPart exact(std::vector<GaussianRational> lambda);
  // tolerance <= 0 selects the default 1e-12 * max|λ|.
  static DiagLinearPart numeric(std::vector<Complex> lambda, double tolerance = 0.0);

  // Rejects any nonzero off-diagonal entry with a diagnostic describing the
  // A = Λ + εN reduction that has to be done by hand.
  static DiagLinearPart from_matrix(int dim, std::span<const GaussianRational> row_major);

  int dim() const { return static_cast<int>(numeric_.size()); }
  bool is_exact() const { return exact_.has_value(); }
  const std::vector<GaussianRational>& exact_eigenvalues() const;
  const std::vector<Complex>& eigenvalues() const { return numeric_; }
  double tolerance() const { return tolerance_; }

  // ⟨λ, q⟩ - λ_comp
  GaussianRational eigenfactor(int comp, const MultiIndex& q) const;
  Complex eigenfactor_numeric(int comp, const MultiIndex& q) const;
  bool is_resonant(int comp, const MultiIndex& q) const;

  // e^{A t} x and its inverse action, componentwise.
  CVector flow(double t, std::span<const Complex> x) const;

  // Same eigenvalues plus trailing zero eigenvalues up to `dim`.
  DiagLinearPart widened(int dim) const;

 private:
  std::optional<std::vector<GaussianRational>> exact_;
  std::vector<Complex> numeric_;
  double tolerance_ = 0.0;
};

struct ResonanceClass {
  int comp;
  MultiIndex exp;
  GaussianRational factor;        // exact mode
  Complex factor_numeric;         // both modes
  bool resonant;
};

// L_A(f) = Df·Ax - Af, i.e. every monomial scaled by its eigenfactor.
PolyVF lie_derivative(const DiagLinearPart& A, const PolyVF& f);

std::vector<ResonanceClass> classify(const DiagLinearPart& A, const PolyVF& f);

// Resonant part (Ker L_A) and its complement (Im L_A).
PolyVF project_K(const DiagLinearPart& A, const PolyVF& f);
PolyVF project_I(const DiagLinearPart& A, const PolyVF& f);

bool in_VK(const DiagLinearPart& A, const PolyVF& f);
bool in_VI(const DiagLinearPart& A, const PolyVF& f);

/// Q(g): the unique F with L_A F = g and P_K F = 0. Throws ResonantInput if g
/// carries a resonant monomial.
PolyVF pseudo_inverse_Q(const DiagLinearPart& A, const PolyVF& g);

nlohmann::json resonance_report(const DiagLinearPart& A, const PolyVF& f);

}  // namespace rgnf
