#include "rgnf/rg_core.hpp"

#include <cmath>
#include <sstream>

#include "rgnf/errors.hpp"

namespace rgnf {

namespace {

PolyVF scale_by_eigenvalues(const DiagLinearPart& A, const PolyVF& f) {
  const auto& lam = A.exact_eigenvalues();
  std::vector<Poly> comps;
  for (int i = 0; i < f.dim(); ++i) comps.push_back(f.component(i).scaled(lam[i]));
  return PolyVF(std::move(comps));
}

PolyVF cap(const PolyVF& f, std::optional<int> degree_cap) {
  return degree_cap ? f.truncated(*degree_cap) : f;
}

}  // namespace

// ---------------------------------------------------------------- series

PerturbationSeries::PerturbationSeries(DiagLinearPart A, std::vector<PolyVF> g, int max_order)
    : A_(std::move(A)), g_(std::move(g)), max_order_(max_order) {
  if (max_order_ < 1) throw OrderOutOfRange("order cap must be at least 1");
  for (std::size_t k = 0; k < g_.size(); ++k) {
    if (g_[k].dim() != A_.dim())
      throw DimensionMismatch("g_" + std::to_string(k + 1) + " has dimension " +
                              std::to_string(g_[k].dim()) + ", A has " + std::to_string(A_.dim()));
    if (!g_[k].is_constant_free())
      throw DomainError("g_" + std::to_string(k + 1) + " does not vanish at the origin");
  }
}

PolyVF PerturbationSeries::g(int k) const {
  if (k < 1) throw OrderOutOfRange("perturbation orders start at 1");
  if (k > static_cast<int>(g_.size())) return PolyVF(dim());
  return g_[k - 1];
}

// ---------------------------------------------------------------- secular table

SecularTable::SecularTable(int dim, std::vector<std::vector<PolyVF>> rows)
    : dim_(dim), rows_(std::move(rows)) {}

PolyVF SecularTable::at(int i, int j) const {
  if (i < 1 || i > order() || j < 1) throw OrderOutOfRange("secular table index out of range");
  if (j > i) return PolyVF(dim_);
  return rows_[i - 1][j - 1];
}

// ---------------------------------------------------------------- recursion

PolyVF extract_Gk(const PerturbationSeries& ps, std::span<const PolyVF> substitutions, int k,
                  std::optional<int> degree_cap) {
  if (k < 1 || k > ps.max_order())
    throw OrderOutOfRange("extract_Gk: order " + std::to_string(k) + " outside 1.." +
                          std::to_string(ps.max_order()));
  if (static_cast<int>(substitutions.size()) < k)
    throw OrderOutOfRange("extract_Gk: order " + std::to_string(k) + " needs x_0..x_" +
                          std::to_string(k - 1));
  PolyVF G(ps.dim());
  for (int j = 1; j <= k; ++j) {
    PolyVF gj = ps.g(j);
    if (gj.is_zero()) continue;
    auto graded = substitute(gj, substitutions.first(k - j + 1), k - j, degree_cap);
    G += graded[k - j];
  }
  return cap(G, degree_cap);
}

NormalFormResult compute_Rk(const PerturbationSeries& ps, int m, std::optional<int> degree_cap) {
  if (m < 1 || m > ps.max_order())
    throw OrderOutOfRange("compute_Rk: order " + std::to_string(m) + " outside 1.." +
                          std::to_string(ps.max_order()));
  const DiagLinearPart& A = ps.A();
  if (!A.is_exact()) throw DomainError("compute_Rk requires exact eigenvalues");
  const int n = ps.dim();

  NormalFormResult nf{m, A, {}, {}, {}, {}, degree_cap};
  std::vector<PolyVF> subs{PolyVF::identity(n)};
  for (int k = 1; k <= m; ++k) {
    PolyVF R(n);
    if (k == 1) {
      R = cap(ps.g(1), degree_cap);
    } else {
      R = extract_Gk(ps, subs, k, degree_cap);
      for (int j = 1; j <= k - 1; ++j) R -= jacobian_apply(nf.QPI_Rk[j - 1], nf.PK_Rk[k - j - 1], degree_cap);
    }
    PolyVF pk = project_K(A, R);
    PolyVF qpi = pseudo_inverse_Q(A, project_I(A, R));
    nf.Rk.push_back(std::move(R));
    nf.PK_Rk.push_back(std::move(pk));
    subs.push_back(qpi);
    nf.QPI_Rk.push_back(std::move(qpi));
  }
  nf.secular = secular_table(nf);
  return nf;
}

SecularTable secular_table(const NormalFormResult& nf) {
  const int m = static_cast<int>(nf.PK_Rk.size());
  const int n = nf.A.dim();
  std::vector<std::vector<PolyVF>> p(m);
  for (int i = 1; i <= m; ++i) {
    PolyVF first = nf.PK_Rk[i - 1];
    for (int k = 1; k <= i - 1; ++k)
      first += jacobian_apply(nf.QPI_Rk[k - 1], nf.PK_Rk[i - k - 1], nf.degree_cap);
    p[i - 1].push_back(std::move(first));
    for (int j = 2; j <= i; ++j) {
      PolyVF acc(n);
      // p^(k)_{j-1} vanishes for j-1 > k, so k starts at j-1.
      for (int k = j - 1; k <= i - 1; ++k)
        acc += jacobian_apply(p[k - 1][j - 2], nf.PK_Rk[i - k - 1], nf.degree_cap);
      p[i - 1].push_back(acc.scaled(GaussianRational(Rational(1, j))));
    }
  }
  return SecularTable(n, std::move(p));
}

// ---------------------------------------------------------------- solution

SymbolicSolution perturbation_solution(const NormalFormResult& nf, int i) {
  if (i < 1 || i > nf.order) throw OrderOutOfRange("perturbation_solution: order out of range");
  SymbolicSolution s{nf.A, nf.QPI_Rk[i - 1], {}};
  for (int j = 1; j <= i; ++j) s.secular.push_back(nf.secular.at(i, j));
  return s;
}

CVector SymbolicSolution::eval(double t, std::span<const Complex> y) const {
  CVector z = A.flow(t, y);
  CVector out = initial.eval(z);
  double tp = 1.0;
  for (const auto& p : secular) {
    tp *= t;
    CVector v = p.eval(z);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += v[c] * tp;
  }
  return out;
}

PolyVF SymbolicSolution::time_lifted() const {
  const int n = initial.dim();
  const int N = n + 1;
  PolyVF out = initial.widened(N);
  for (std::size_t j = 0; j < secular.size(); ++j) {
    MultiIndex tpow(N);
    for (std::size_t p = 0; p <= j; ++p) tpow = tpow + MultiIndex::unit(N, n);
    for (const auto& t : secular[j].terms()) out.add_term(t.comp, t.exp.widened(N) + tpow, t.coeff);
  }
  return out;
}

PolyVF hierarchy_residual(const PerturbationSeries& ps, const NormalFormResult& nf, int i) {
  if (i < 1 || i > nf.order) throw OrderOutOfRange("hierarchy_residual: order out of range");
  const int n = ps.dim();
  const int N = n + 1;
  const DiagLinearPart AN = nf.A.widened(N);

  std::vector<PolyVF> X{PolyVF::identity(n).widened(N)};
  for (int l = 1; l <= i; ++l) X.push_back(perturbation_solution(nf, l).time_lifted());

  // d/dt of F(z, t) along ż = Az, ṫ = 1.
  PolyVF V = PolyVF::identity(N);
  V = scale_by_eigenvalues(AN, V);
  V.add_term(n, MultiIndex(N), GaussianRational(1));

  PolyVF lhs = jacobian_apply(X[i], V);
  PolyVF rhs = scale_by_eigenvalues(AN, X[i]);
  for (int j = 1; j <= i; ++j) {
    PolyVF gj = ps.g(j).widened(N);
    if (gj.is_zero()) continue;
    auto graded = substitute(gj, std::span<const PolyVF>(X).first(i - j + 1), i - j);
    rhs += graded[i - j];
  }
  return lhs - rhs;
}

// ---------------------------------------------------------------- normal form

NormalForm::NormalForm(DiagLinearPart A, std::vector<PolyVF> terms)
    : A_(std::move(A)), terms_(std::move(terms)) {
  for (const auto& t : terms_) compiled_.emplace_back(t);
}

CVector NormalForm::eval(std::span<const Complex> z, double eps) const {
  CVector out(z.size());
  const auto& lam = A_.eigenvalues();
  for (std::size_t v = 0; v < z.size(); ++v) out[v] = lam[v] * z[v];
  double ek = 1.0;
  CVector tmp(z.size());
  for (const auto& c : compiled_) {
    ek *= eps;
    c.eval(z, tmp);
    for (std::size_t v = 0; v < z.size(); ++v) out[v] += ek * tmp[v];
  }
  return out;
}

NormalForm normal_form(const NormalFormResult& nf) { return NormalForm(nf.A, nf.PK_Rk); }

NearIdentity::NearIdentity(std::vector<PolyVF> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) compiled_.emplace_back(t);
}

CVector NearIdentity::forward(std::span<const Complex> z, double eps) const {
  CVector out(z.begin(), z.end());
  double ek = 1.0;
  CVector tmp(z.size());
  for (const auto& c : compiled_) {
    ek *= eps;
    c.eval(z, tmp);
    for (std::size_t v = 0; v < z.size(); ++v) out[v] += ek * tmp[v];
  }
  return out;
}

CVector NearIdentity::inverse(std::span<const Complex> x, double eps, double step_tol,
                              int max_iter) const {
  CVector z(x.begin(), x.end());
  double scale = 1.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  double step = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVector shift = forward(z, eps);
    CVector next(x.size());
    step = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
      next[v] = x[v] - (shift[v] - z[v]);
      step = std::max(step, std::abs(next[v] - z[v]));
    }
    z = std::move(next);
    if (!std::isfinite(step)) break;
    if (step <= step_tol * scale) return z;
  }
  std::ostringstream os;
  os << "near-identity inversion did not converge (eps = " << eps << ", last step " << step
     << ", x = [";
  for (std::size_t v = 0; v < x.size(); ++v) os << (v ? ", " : "") << x[v];
  os << "], z = [";
  for (std::size_t v = 0; v < z.size(); ++v) os << (v ? ", " : "") << z[v];
  os << "])";
  throw InversionDiverged(os.str());
}

NearIdentity near_identity(const NormalFormResult& nf) { return NearIdentity(nf.QPI_Rk); }

}  // namespace rgnf
