#include "rgnf/polyvec.hpp"

#include <algorithm>
#include <tuple>

#include "rgnf/errors.hpp"

namespace rgnf {

namespace {

void require_same_dim(int a, int b, const char* op) {
  if (a != b)
    throw DimensionMismatch(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
}

// Power series in ε whose coefficients are scalar polynomials.
using EpsSeries = std::vector<Poly>;

EpsSeries eps_multiply(const EpsSeries& a, const EpsSeries& b, int order,
                       std::optional<int> degree_cap) {
  const int dim = a.front().dim();
  EpsSeries c(order + 1, Poly(dim));
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) {
      if (b[j].is_zero()) continue;
      c[i + j] += a[i].multiplied(b[j], degree_cap);
    }
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------- Poly

Poly Poly::constant(int dim, const GaussianRational& c) {
  Poly p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

Poly Poly::variable(int dim, int var) {
  Poly p(dim);
  p.add_term(MultiIndex::unit(dim, var), GaussianRational(1));
  return p;
}

Poly Poly::monomial(const MultiIndex& q, const GaussianRational& c) {
  Poly p(q.dim());
  p.add_term(q, c);
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [q, c] : terms_) d = std::max(d, q.degree());
  return d;
}

int Poly::min_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

GaussianRational Poly::coefficient(const MultiIndex& q) const {
  auto it = terms_.find(q);
  return it == terms_.end() ? GaussianRational() : it->second;
}

void Poly::add_term(const MultiIndex& q, const GaussianRational& c) {
  require_same_dim(dim_, q.dim(), "Poly::add_term");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(q, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_dim(dim_, o.dim_, "Poly::+");
  for (const auto& [q, c] : o.terms_) add_term(q, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_same_dim(dim_, o.dim_, "Poly::-");
  for (const auto& [q, c] : o.terms_) add_term(q, -c);
  return *this;
}

Poly Poly::scaled(const GaussianRational& c) const {
  Poly r(dim_);
  if (c.is_zero()) return r;
  for (const auto& [q, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), q, a * c);
  return r;
}

Poly Poly::multiplied(const Poly& o, std::optional<int> degree_cap) const {
  require_same_dim(dim_, o.dim_, "Poly::*");
  Poly r(dim_);
  for (const auto& [qa, ca] : terms_) {
    for (const auto& [qb, cb] : o.terms_) {
      if (degree_cap && qa.degree() + qb.degree() > *degree_cap) continue;
      r.add_term(qa + qb, ca * cb);
    }
  }
  return r;
}

Poly Poly::derivative(int var) const {
  Poly r(dim_);
  for (const auto& [q, c] : terms_) {
    if (q[var] == 0) continue;
    r.add_term(q.lowered(var), c * GaussianRational(q[var]));
  }
  return r;
}

Poly Poly::truncated(int degree) const {
  Poly r(dim_);
  for (const auto& [q, c] : terms_) {
    if (q.degree() > degree) break;  // graded order
    r.terms_.emplace_hint(r.terms_.end(), q, c);
  }
  return r;
}

Poly Poly::widened(int dim) const {
  Poly r(dim);
  for (const auto& [q, c] : terms_) r.terms_.emplace(q.widened(dim), c);
  return r;
}

Complex Poly::eval(std::span<const Complex> x) const {
  require_same_dim(dim_, static_cast<int>(x.size()), "Poly::eval");
  Complex acc{};
  for (const auto& [q, c] : terms_) acc += c.to_complex() * q.eval(x);
  return acc;
}

// ---------------------------------------------------------------- PolyVF

PolyVF::PolyVF(int dim) {
  if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("PolyVF dimension out of range");
  comps_.assign(dim, Poly(dim));
}

PolyVF::PolyVF(std::vector<Poly> components) : comps_(std::move(components)) {
  if (comps_.empty() || static_cast<int>(comps_.size()) > kMaxDim)
    throw DimensionMismatch("PolyVF dimension out of range");
  for (const auto& p : comps_) require_same_dim(p.dim(), dim(), "PolyVF");
}

PolyVF PolyVF::identity(int dim) {
  PolyVF f(dim);
  for (int i = 0; i < dim; ++i) f.add_term(i, MultiIndex::unit(dim, i), GaussianRational(1));
  return f;
}

PolyVF PolyVF::linear(int dim, std::span<const GaussianRational> matrix) {
  if (static_cast<int>(matrix.size()) != dim * dim)
    throw DimensionMismatch("PolyVF::linear expects an n x n matrix");
  PolyVF f(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) f.add_term(i, MultiIndex::unit(dim, j), matrix[i * dim + j]);
  return f;
}

PolyVF PolyVF::monomial(int comp, const MultiIndex& q, const GaussianRational& c) {
  PolyVF f(q.dim());
  f.add_term(comp, q, c);
  return f;
}

void PolyVF::add_term(int comp, const MultiIndex& q, const GaussianRational& c) {
  if (comp < 0 || comp >= dim()) throw DimensionMismatch("component index out of range");
  comps_[comp].add_term(q, c);
}

GaussianRational PolyVF::coefficient(int comp, const MultiIndex& q) const {
  return comps_.at(comp).coefficient(q);
}

std::vector<FieldTerm> PolyVF::terms() const {
  std::vector<FieldTerm> out;
  for (int i = 0; i < dim(); ++i)
    for (const auto& [q, c] : comps_[i].terms()) out.push_back({i, q, c});
  std::stable_sort(out.begin(), out.end(), [](const FieldTerm& a, const FieldTerm& b) {
    if (a.exp < b.exp) return true;
    if (b.exp < a.exp) return false;
    return a.comp < b.comp;
  });
  return out;
}

std::size_t PolyVF::size() const {
  std::size_t n = 0;
  for (const auto& p : comps_) n += p.size();
  return n;
}

bool PolyVF::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Poly& p) { return p.is_zero(); });
}

int PolyVF::degree() const {
  int d = -1;
  for (const auto& p : comps_) d = std::max(d, p.degree());
  return d;
}

int PolyVF::min_degree() const {
  int d = -1;
  for (const auto& p : comps_) {
    int m = p.min_degree();
    if (m >= 0 && (d < 0 || m < d)) d = m;
  }
  return d;
}

bool PolyVF::is_constant_free() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const Poly& p) { return p.is_zero() || p.min_degree() > 0; });
}

bool PolyVF::is_homogeneous(int degree) const {
  for (const auto& p : comps_)
    for (const auto& [q, c] : p.terms())
      if (q.degree() != degree) return false;
  return true;
}

PolyVF& PolyVF::operator+=(const PolyVF& o) {
  require_same_dim(dim(), o.dim(), "PolyVF::+");
  for (int i = 0; i < dim(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

PolyVF& PolyVF::operator-=(const PolyVF& o) {
  require_same_dim(dim(), o.dim(), "PolyVF::-");
  for (int i = 0; i < dim(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

PolyVF PolyVF::scaled(const GaussianRational& c) const {
  std::vector<Poly> out;
  out.reserve(comps_.size());
  for (const auto& p : comps_) out.push_back(p.scaled(c));
  return PolyVF(std::move(out));
}

PolyVF PolyVF::truncated(int degree) const {
  std::vector<Poly> out;
  out.reserve(comps_.size());
  for (const auto& p : comps_) out.push_back(p.truncated(degree));
  return PolyVF(std::move(out));
}

PolyVF PolyVF::widened(int dim) const {
  std::vector<Poly> out;
  for (const auto& p : comps_) out.push_back(p.widened(dim));
  while (static_cast<int>(out.size()) < dim) out.emplace_back(dim);
  return PolyVF(std::move(out));
}

CVector PolyVF::eval(std::span<const Complex> x) const {
  CVector out(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].eval(x);
  return out;
}

// ---------------------------------------------------------------- CompiledField

CompiledField::CompiledField(const PolyVF& f) : dim_(f.dim()) {
  for (int i = 0; i < f.dim(); ++i) {
    for (const auto& [q, c] : f.component(i).terms()) {
      Term t{i, {}, c.to_complex()};
      for (int v = 0; v < dim_; ++v) {
        t.exps[v] = static_cast<std::uint16_t>(q[v]);
        max_exp_ = std::max(max_exp_, q[v]);
      }
      terms_.push_back(t);
    }
  }
}

void CompiledField::eval(std::span<const Complex> x, std::span<Complex> out) const {
  require_same_dim(dim_, static_cast<int>(x.size()), "CompiledField::eval");
  const int stride = max_exp_ + 1;
  // powers[v * stride + p] = x_v^p
  std::vector<Complex> powers(static_cast<std::size_t>(dim_) * stride);
  for (int v = 0; v < dim_; ++v) {
    powers[v * stride] = 1.0;
    for (int p = 1; p <= max_exp_; ++p) powers[v * stride + p] = powers[v * stride + p - 1] * x[v];
  }
  std::fill(out.begin(), out.end(), Complex{});
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    for (int v = 0; v < dim_; ++v)
      if (t.exps[v]) m *= powers[v * stride + t.exps[v]];
    out[t.comp] += m;
  }
}

CVector CompiledField::operator()(std::span<const Complex> x) const {
  CVector out(dim_);
  eval(x, out);
  return out;
}

// ---------------------------------------------------------------- operations

PolyVF add(const PolyVF& f, const PolyVF& g) { return f + g; }

PolyVF jacobian_apply(const PolyVF& f, const PolyVF& g, std::optional<int> degree_cap) {
  require_same_dim(f.dim(), g.dim(), "jacobian_apply");
  const int n = f.dim();
  std::vector<Poly> out(n, Poly(n));
  for (int i = 0; i < n; ++i) {
    const Poly& fi = f.component(i);
    if (fi.is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (g.component(j).is_zero()) continue;
      Poly d = fi.derivative(j);
      if (d.is_zero()) continue;
      out[i] += d.multiplied(g.component(j), degree_cap);
    }
  }
  return PolyVF(std::move(out));
}

PolyVF lie_bracket(const PolyVF& f, const PolyVF& g, std::optional<int> degree_cap) {
  require_same_dim(f.dim(), g.dim(), "lie_bracket");
  return jacobian_apply(f, g, degree_cap) - jacobian_apply(g, f, degree_cap);
}

PolyVF truncate(const PolyVF& f, int degree) {
  if (degree < 0) throw DomainError("truncate: negative degree");
  return f.truncated(degree);
}

std::vector<PolyVF> substitute(const PolyVF& f, std::span<const PolyVF> series, int order,
                               std::optional<int> degree_cap) {
  if (order < 0) throw OrderOutOfRange("substitute: a non-negative truncation order is required");
  if (series.empty()) throw DimensionMismatch("substitute: empty series");
  const int n = f.dim();
  for (const auto& s : series) require_same_dim(n, s.dim(), "substitute");

  // X[v] = Σ_k ε^k series[k]_v
  std::vector<EpsSeries> X(n, EpsSeries(order + 1, Poly(n)));
  for (int k = 0; k <= order && k < static_cast<int>(series.size()); ++k)
    for (int v = 0; v < n; ++v) X[v][k] = series[k].component(v);

  // powers[v][p] = X[v]^p, built on demand.
  std::vector<std::vector<EpsSeries>> powers(n);
  auto power = [&](int v, int p) -> const EpsSeries& {
    auto& tab = powers[v];
    if (tab.empty()) {
      EpsSeries one(order + 1, Poly(n));
      one[0] = Poly::constant(n, GaussianRational(1));
      tab.push_back(std::move(one));
    }
    while (static_cast<int>(tab.size()) <= p)
      tab.push_back(eps_multiply(tab.back(), X[v], order, degree_cap));
    return tab[p];
  };

  std::vector<PolyVF> out(order + 1, PolyVF(n));
  for (int i = 0; i < n; ++i) {
    for (const auto& [q, c] : f.component(i).terms()) {
      EpsSeries prod;
      for (int v = 0; v < n; ++v) {
        if (q[v] == 0) continue;
        const EpsSeries& pw = power(v, q[v]);
        prod = prod.empty() ? pw : eps_multiply(prod, pw, order, degree_cap);
      }
      if (prod.empty()) {  // constant term
        out[0].add_term(i, MultiIndex(n), c);
        continue;
      }
      for (int k = 0; k <= order; ++k) {
        for (const auto& [m, a] : prod[k].terms()) out[k].add_term(i, m, a * c);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const PolyVF& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : f.terms()) {
    terms.push_back({{"comp", t.comp + 1},
                     {"exp", t.exp.to_vector()},
                     {"re", rational_to_string(t.coeff.re())},
                     {"im", rational_to_string(t.coeff.im())}});
  }
  return {{"dim", f.dim()}, {"terms", terms}};
}

PolyVF polyvf_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    PolyVF f(dim);
    for (const auto& t : j.at("terms")) {
      const int comp = t.at("comp").get<int>() - 1;
      auto exps = t.at("exp").get<std::vector<int>>();
      if (static_cast<int>(exps.size()) != dim)
        throw DimensionMismatch("PolyVF JSON: exponent length differs from dim");
      auto read = [&](const char* key) {
        if (!t.contains(key)) return Rational(0);
        const auto& v = t.at(key);
        return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
      };
      f.add_term(comp, MultiIndex(std::span<const int>(exps)), GaussianRational(read("re"), read("im")));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("PolyVF JSON: ") + e.what());
  }
}

}  // namespace rgnf
