#include "rgnf/random_fields.hpp"

#include <array>

namespace rgnf {

int RandomFields::integer(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

double RandomFields::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Rational RandomFields::rational(int max_num, int max_den) {
  Rational q(integer(-max_num, max_num), integer(1, max_den));
  q.canonicalize();
  return q;
}

GaussianRational RandomFields::gaussian(int max_num, int max_den) {
  for (;;) {
    GaussianRational c(rational(max_num, max_den), rational(max_num, max_den));
    if (!c.is_zero()) return c;
  }
}

namespace {

MultiIndex random_monomial(RandomFields& r, int dim, int degree) {
  auto all = monomials_of_degree(dim, degree);
  return all[r.integer(0, static_cast<int>(all.size()) - 1)];
}

}  // namespace

PolyVF RandomFields::field(int dim, int min_degree, int max_degree, int terms) {
  PolyVF f(dim);
  for (int t = 0; t < terms; ++t) {
    int d = integer(min_degree, max_degree);
    int comp = integer(0, dim - 1);
    f.add_term(comp, random_monomial(*this, dim, d), gaussian());
  }
  return f;
}

PolyVF RandomFields::field_in_VI(const DiagLinearPart& A, int min_degree, int max_degree,
                                 int terms) {
  return project_I(A, field(A.dim(), min_degree, max_degree, terms));
}

PolyVF RandomFields::field_in_VK(const DiagLinearPart& A, int min_degree, int max_degree,
                                 int terms) {
  std::vector<std::pair<int, MultiIndex>> pool;
  for (int d = min_degree; d <= max_degree; ++d)
    for (const auto& q : monomials_of_degree(A.dim(), d))
      for (int c = 0; c < A.dim(); ++c)
        if (A.is_resonant(c, q)) pool.emplace_back(c, q);
  PolyVF f(A.dim());
  if (pool.empty()) return f;
  for (int t = 0; t < terms; ++t) {
    const auto& [c, q] = pool[integer(0, static_cast<int>(pool.size()) - 1)];
    f.add_term(c, q, gaussian());
  }
  return f;
}

DiagLinearPart RandomFields::eigenvalues(int dim) {
  static const std::array<GaussianRational, 8> choices = {
      GaussianRational(0, 1), GaussianRational(0, -1), GaussianRational(0, 2),
      GaussianRational(0, -2), GaussianRational(1),    GaussianRational(2),
      GaussianRational(-1),    GaussianRational(1, 1)};
  std::vector<GaussianRational> lam;
  for (int i = 0; i < dim; ++i) lam.push_back(choices[integer(0, 7)]);
  return DiagLinearPart::exact(lam);
}

CVector RandomFields::point(int dim, double radius) {
  CVector x(dim);
  for (auto& c : x) c = Complex(uniform(-radius, radius), uniform(-radius, radius));
  return x;
}

}  // namespace rgnf
