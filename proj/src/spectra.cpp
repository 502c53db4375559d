#include "rgnf/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "rgnf/errors.hpp"

namespace rgnf {

DiagLinearPart DiagLinearPart::exact(std::vector<GaussianRational> lambda) {
  if (lambda.empty() || static_cast<int>(lambda.size()) > kMaxDim)
    throw DimensionMismatch("eigenvalue list length out of range");
  DiagLinearPart A;
  for (const auto& l : lambda) A.numeric_.push_back(l.to_complex());
  A.exact_ = std::move(lambda);
  return A;
}

DiagLinearPart DiagLinearPart::numeric(std::vector<Complex> lambda, double tolerance) {
  if (lambda.empty() || static_cast<int>(lambda.size()) > kMaxDim)
    throw DimensionMismatch("eigenvalue list length out of range");
  DiagLinearPart A;
  double scale = 0.0;
  for (const auto& l : lambda) scale = std::max(scale, std::abs(l));
  A.numeric_ = std::move(lambda);
  A.tolerance_ = tolerance > 0.0 ? tolerance : 1e-12 * std::max(scale, 1e-300);
  return A;
}

DiagLinearPart DiagLinearPart::from_matrix(int dim, std::span<const GaussianRational> m) {
  if (static_cast<int>(m.size()) != dim * dim) throw DimensionMismatch("A must be n x n");
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i != j && !m[i * dim + j].is_zero()) {
        throw NotDiagonal(
            "A has a nonzero off-diagonal entry at (" + std::to_string(i + 1) + ", " +
            std::to_string(j + 1) +
            "). Only diagonal A is supported: bring A to Jordan form A = Λ + N, treat the "
            "nilpotent part as a perturbation (A = Λ + εN, adding N x to the first-order "
            "term g_1), and supply Λ as the eigenvalue list.");
      }
    }
  }
  std::vector<GaussianRational> diag;
  for (int i = 0; i < dim; ++i) diag.push_back(m[i * dim + i]);
  return exact(std::move(diag));
}

const std::vector<GaussianRational>& DiagLinearPart::exact_eigenvalues() const {
  if (!exact_) throw DomainError("exact eigenvalues requested from a numeric linear part");
  return *exact_;
}

GaussianRational DiagLinearPart::eigenfactor(int comp, const MultiIndex& q) const {
  const auto& lam = exact_eigenvalues();
  if (q.dim() != dim()) throw DimensionMismatch("eigenfactor: multi-index dimension");
  GaussianRational f = -lam.at(comp);
  for (int v = 0; v < dim(); ++v)
    if (q[v]) f += lam[v] * GaussianRational(q[v]);
  return f;
}

Complex DiagLinearPart::eigenfactor_numeric(int comp, const MultiIndex& q) const {
  if (q.dim() != dim()) throw DimensionMismatch("eigenfactor: multi-index dimension");
  Complex f = -numeric_.at(comp);
  for (int v = 0; v < dim(); ++v) f += numeric_[v] * static_cast<double>(q[v]);
  return f;
}

bool DiagLinearPart::is_resonant(int comp, const MultiIndex& q) const {
  if (exact_) return eigenfactor(comp, q).is_zero();
  return std::abs(eigenfactor_numeric(comp, q)) <= tolerance_;
}

CVector DiagLinearPart::flow(double t, std::span<const Complex> x) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionMismatch("flow: point dimension");
  CVector out(x.size());
  for (int v = 0; v < dim(); ++v) out[v] = std::exp(numeric_[v] * t) * x[v];
  return out;
}

DiagLinearPart DiagLinearPart::widened(int dim) const {
  if (exact_) {
    auto lam = *exact_;
    lam.resize(dim);
    return exact(std::move(lam));
  }
  auto lam = numeric_;
  lam.resize(dim);
  return numeric(std::move(lam), tolerance_);
}

namespace {

void require_dims(const DiagLinearPart& A, const PolyVF& f, const char* op) {
  if (A.dim() != f.dim())
    throw DimensionMismatch(std::string(op) + ": field dimension " + std::to_string(f.dim()) +
                            " differs from A (" + std::to_string(A.dim()) + ")");
}

template <class Keep>
PolyVF filter(const DiagLinearPart& A, const PolyVF& f, Keep keep) {
  PolyVF out(f.dim());
  for (int i = 0; i < f.dim(); ++i)
    for (const auto& [q, c] : f.component(i).terms())
      if (keep(A.is_resonant(i, q))) out.add_term(i, q, c);
  return out;
}

}  // namespace

PolyVF lie_derivative(const DiagLinearPart& A, const PolyVF& f) {
  require_dims(A, f, "lie_derivative");
  PolyVF out(f.dim());
  for (int i = 0; i < f.dim(); ++i)
    for (const auto& [q, c] : f.component(i).terms()) out.add_term(i, q, c * A.eigenfactor(i, q));
  return out;
}

std::vector<ResonanceClass> classify(const DiagLinearPart& A, const PolyVF& f) {
  require_dims(A, f, "classify");
  std::vector<ResonanceClass> out;
  for (const auto& t : f.terms()) {
    ResonanceClass rc{t.comp, t.exp, {}, A.eigenfactor_numeric(t.comp, t.exp), false};
    if (A.is_exact()) rc.factor = A.eigenfactor(t.comp, t.exp);
    rc.resonant = A.is_resonant(t.comp, t.exp);
    out.push_back(std::move(rc));
  }
  return out;
}

PolyVF project_K(const DiagLinearPart& A, const PolyVF& f) {
  require_dims(A, f, "project_K");
  return filter(A, f, [](bool resonant) { return resonant; });
}

PolyVF project_I(const DiagLinearPart& A, const PolyVF& f) {
  require_dims(A, f, "project_I");
  return filter(A, f, [](bool resonant) { return !resonant; });
}

bool in_VK(const DiagLinearPart& A, const PolyVF& f) { return project_I(A, f).is_zero(); }
bool in_VI(const DiagLinearPart& A, const PolyVF& f) { return project_K(A, f).is_zero(); }

PolyVF pseudo_inverse_Q(const DiagLinearPart& A, const PolyVF& g) {
  require_dims(A, g, "pseudo_inverse_Q");
  PolyVF out(g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    for (const auto& [q, c] : g.component(i).terms()) {
      GaussianRational factor = A.eigenfactor(i, q);
      if (factor.is_zero()) {
        auto e = q.to_vector();
        std::string mono;
        for (std::size_t v = 0; v < e.size(); ++v) mono += (v ? "," : "") + std::to_string(e[v]);
        throw ResonantInput("pseudo_inverse_Q: resonant monomial x^(" + mono + ") e_" +
                            std::to_string(i + 1) + "; project onto V_I first");
      }
      out.add_term(i, q, c / factor);
    }
  }
  return out;
}

nlohmann::json resonance_report(const DiagLinearPart& A, const PolyVF& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rc : classify(A, f)) {
    nlohmann::json e = {{"comp", rc.comp + 1}, {"exp", rc.exp.to_vector()}, {"resonant", rc.resonant}};
    if (A.is_exact()) {
      e["factor_re"] = rational_to_string(rc.factor.re());
      e["factor_im"] = rational_to_string(rc.factor.im());
    } else {
      e["factor_re"] = rc.factor_numeric.real();
      e["factor_im"] = rc.factor_numeric.imag();
      e["tolerance"] = A.tolerance();
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace rgnf
