#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rgnf/errors.hpp"
#include "rgnf/fixtures.hpp"
#include "rgnf/random_fields.hpp"
#include "rgnf/rg_core.hpp"

using namespace rgnf;
using namespace testutil;

namespace {

DiagLinearPart osc() { return DiagLinearPart::exact({gr(0, 1), gr(0, -1)}); }

// ½ D²f(x)[a, b] expanded from second partial derivatives.
PolyVF half_hessian(const PolyVF& f, const PolyVF& a, const PolyVF& b) {
  int n = f.dim();
  PolyVF out(n);
  for (int c = 0; c < n; ++c) {
    Poly acc(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        acc += f.component(c).derivative(i).derivative(j) * a.component(i) * b.component(j);
    for (const auto& [e, v] : acc.terms()) out.add_term(c, e, v * q(1, 2));
  }
  return out;
}

// (-1)^m / (m! (m+1)!) as an exact rational.
Rational bessel_coefficient(int m) {
  mpz_class f = 1;
  for (int k = 2; k <= m; ++k) f *= k;
  Rational r(mpz_class(m % 2 ? -1 : 1), f * f * (m + 1));
  r.canonicalize();
  return r;
}

}  // namespace

TEST_SUITE("rg-core") {

TEST_CASE("G_k for k = 1, 2, 3") {
  RandomFields rf(21);
  for (int t = 0; t < 10; ++t) {
    DiagLinearPart A = rf.eigenvalues(2);
    PolyVF g1 = rf.field(2, 1, 3, 3), g2 = rf.field(2, 1, 3, 3), g3 = rf.field(2, 1, 3, 3);
    PerturbationSeries ps(A, {g1, g2, g3});
    PolyVF x1 = rf.field(2, 1, 2, 2), x2 = rf.field(2, 1, 2, 2);
    std::vector<PolyVF> subs = {PolyVF::identity(2), x1, x2};
    CHECK(extract_Gk(ps, std::span(subs).first(1), 1) == g1);
    CHECK(extract_Gk(ps, std::span(subs).first(2), 2) == jacobian_apply(g1, x1) + g2);
    CHECK(extract_Gk(ps, subs, 3) == half_hessian(g1, x1, x1) + jacobian_apply(g1, x2) +
                                         jacobian_apply(g2, x1) + g3);
  }
  PerturbationSeries ps(osc(), {mono(2, 0, {1, 0}, gr(1))}, 2);
  std::vector<PolyVF> subs = {PolyVF::identity(2), PolyVF(2), PolyVF(2)};
  CHECK_THROWS_AS(extract_Gk(ps, subs, 3), OrderOutOfRange);
}

TEST_CASE("R_2 closed form") {
  RandomFields rf(22);
  for (int t = 0; t < 30; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    int n = A.dim();
    PolyVF g1 = rf.field(n, 1, 3, 4), g2 = rf.field(n, 1, 3, 3);
    auto nf = compute_Rk(PerturbationSeries(A, {g1, g2}), 2);
    PolyVF K = project_K(A, g1), Qg = pseudo_inverse_Q(A, project_I(A, g1));
    CHECK(nf.Rk[0] == g1);
    CHECK(nf.Rk[1] == jacobian_apply(g1, Qg) + g2 - jacobian_apply(Qg, K));
    for (int k = 0; k < 2; ++k) {
      CHECK(nf.PK_Rk[k] == project_K(A, nf.Rk[k]));
      CHECK(nf.QPI_Rk[k] == pseudo_inverse_Q(A, project_I(A, nf.Rk[k])));
    }
  }
}

TEST_CASE("fully resonant g_1 leaves nothing to remove") {
  RandomFields rf(23);
  for (int t = 0; t < 20; ++t) {
    DiagLinearPart A = osc();
    PolyVF g1 = rf.field_in_VK(A, 1, 5, 3);
    auto nf = compute_Rk(PerturbationSeries(A, {g1}), 3);
    CHECK(nf.QPI_Rk[0].is_zero());
    CHECK(nf.Rk[1].is_zero());
    CHECK(nf.Rk[2].is_zero());
  }
}

TEST_CASE("sine oscillator: resonant radial coefficients follow J1(2r)") {
  auto nf = compute_Rk(fixtures::example41_series(7), 1);
  const PolyVF& pk = nf.PK_Rk[0];
  for (int m = 0; m <= 3; ++m) {
    CHECK(pk.coefficient(0, MultiIndex{m + 1, m}) == GaussianRational(bessel_coefficient(m)));
    CHECK(pk.coefficient(1, MultiIndex{m, m + 1}) == GaussianRational(bessel_coefficient(m)));
  }
  CHECK(bessel_coefficient(3) == Rational(-1, 144));
  CHECK(pk.size() == 8);
}

TEST_CASE("secular table low entries") {
  RandomFields rf(24);
  for (int t = 0; t < 20; ++t) {
    DiagLinearPart A = osc();
    PolyVF g1 = rf.field(2, 1, 3, 4), g2 = rf.field(2, 1, 3, 3);
    auto nf = compute_Rk(PerturbationSeries(A, {g1, g2}), 3);
    const auto& p = nf.secular;
    PolyVF K1 = nf.PK_Rk[0];
    CHECK(p.at(1, 1) == K1);
    CHECK(p.at(2, 2) == jacobian_apply(K1, K1).scaled(q(1, 2)));
    CHECK(p.at(2, 1) == nf.PK_Rk[1] + jacobian_apply(nf.QPI_Rk[0], K1));
    CHECK(p.at(3, 3) == jacobian_apply(p.at(2, 2), K1).scaled(q(1, 3)));
    CHECK(p.at(1, 2).is_zero());
    CHECK(p.at(2, 3).is_zero());
  }
}

TEST_CASE("perturbation solution") {
  RandomFields rf(25);
  DiagLinearPart A = osc();
  PolyVF g1 = rf.field(2, 1, 3, 4);
  auto nf = compute_Rk(PerturbationSeries(A, {g1}), 2);
  auto s1 = perturbation_solution(nf, 1);
  CHECK(s1.initial == pseudo_inverse_Q(A, project_I(A, g1)));
  REQUIRE(s1.secular.size() >= 1);
  CHECK(s1.secular[0] == project_K(A, g1));
  for (std::size_t j = 1; j < s1.secular.size(); ++j) CHECK(s1.secular[j].is_zero());
  for (int i = 1; i <= 2; ++i) {
    auto s = perturbation_solution(nf, i);
    CVector y = rf.point(2, 0.8);
    CHECK(max_diff(s.eval(0.0, y), nf.QPI_Rk[i - 1].eval(y)) < 1e-14);
    // x_1(t) = Q(g_1I)(e^{At}y) + g_1K(e^{At}y) t
    if (i == 1) {
      double t = 0.7;
      CVector z = A.flow(t, y);
      CVector want = s1.initial.eval(z), k = s1.secular[0].eval(z);
      for (int c = 0; c < 2; ++c) want[c] += k[c] * t;
      CHECK(max_diff(s.eval(t, y), want) < 1e-13);
    }
  }
}

TEST_CASE("hierarchy equations hold exactly") {
  RandomFields rf(26);
  std::vector<PerturbationSeries> systems = {
      PerturbationSeries(osc(), {rf.field(2, 1, 3, 3), rf.field(2, 1, 3, 3), rf.field(2, 1, 2, 2)}),
      PerturbationSeries(rf.eigenvalues(3), {rf.field(3, 1, 2, 3), rf.field(3, 1, 2, 2)}),
      fixtures::example41_series(5)};
  for (const auto& ps : systems) {
    auto nf = compute_Rk(ps, 3);
    for (int i = 1; i <= 3; ++i) CHECK(hierarchy_residual(ps, nf, i).is_zero());
  }
}

TEST_CASE("x_2 matches its closed form term by term") {
  RandomFields rf(27);
  DiagLinearPart A = osc();
  PolyVF g1 = rf.field(2, 1, 3, 4), g2 = rf.field(2, 1, 3, 3);
  auto nf = compute_Rk(PerturbationSeries(A, {g1, g2}), 2);
  PolyVF K = project_K(A, g1), Qg = pseudo_inverse_Q(A, project_I(A, g1));
  PolyVF R2 = jacobian_apply(g1, Qg) + g2 - jacobian_apply(Qg, K);
  auto s = perturbation_solution(nf, 2);
  CHECK(s.initial == pseudo_inverse_Q(A, project_I(A, R2)));
  REQUIRE(s.secular.size() >= 2);
  CHECK(s.secular[0] == project_K(A, R2) + jacobian_apply(Qg, K));
  CHECK(s.secular[1] == jacobian_apply(K, K).scaled(q(1, 2)));
}

TEST_CASE("normal form terms are equivariant") {
  RandomFields rf(28);
  for (int t = 0; t < 10; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(2, 3));
    int n = A.dim();
    auto nf = compute_Rk(PerturbationSeries(A, {rf.field(n, 1, 3, 3), rf.field(n, 1, 2, 3)}), 3);
    for (const auto& pk : nf.PK_Rk) CHECK(project_I(A, pk).is_zero());
  }
}

TEST_CASE("graded input gives homogeneous resonant terms") {
  RandomFields rf(29);
  for (int t = 0; t < 10; ++t) {
    DiagLinearPart A = rf.eigenvalues(2);
    std::vector<PolyVF> g;
    for (int k = 1; k <= 3; ++k) g.push_back(rf.field(2, k + 1, k + 1, 4));
    auto nf = compute_Rk(PerturbationSeries(A, g), 3);
    for (int k = 1; k <= 3; ++k) {
      const PolyVF& pk = nf.PK_Rk[k - 1];
      CHECK(pk.is_homogeneous(k + 1));
      CHECK(in_VK(A, pk));
    }
  }
}

TEST_CASE("normal form of trivial inputs") {
  DiagLinearPart A = osc();
  auto zero = compute_Rk(PerturbationSeries(A, {PolyVF(2)}), 3);
  NormalForm nf = normal_form(zero);
  CVector z = {Complex(0.3, 0.1), Complex(-0.2, 0.4)};
  CVector want = {Complex(0, 1) * z[0], Complex(0, -1) * z[1]};
  CHECK(max_diff(nf.eval(z, 0.5), want) < 1e-15);
  NearIdentity id = near_identity(zero);
  CHECK(max_diff(id.forward(z, 0.5), z) == 0.0);

  RandomFields rf(30);
  PolyVF g1 = rf.field_in_VI(A, 1, 4, 4);
  auto nfI = compute_Rk(PerturbationSeries(A, {g1}), 3);
  CHECK(nfI.PK_Rk[0].is_zero());
  for (int k = 1; k < 3; ++k)
    if (in_VI(A, nfI.Rk[k])) CHECK(nfI.PK_Rk[k].is_zero());
}

TEST_CASE("first-order transform for the sine oscillator") {
  auto nf = compute_Rk(fixtures::example41_series(3), 1);
  const PolyVF& h = nf.QPI_Rk[0];
  PolyVF want(2);
  want.add_term(0, MultiIndex{0, 1}, iq(1, 2));
  want.add_term(0, MultiIndex{3, 0}, iq(1, 12));
  want.add_term(0, MultiIndex{1, 2}, iq(-1, 4));
  want.add_term(0, MultiIndex{0, 3}, iq(-1, 24));
  want.add_term(1, MultiIndex{1, 0}, iq(-1, 2));
  want.add_term(1, MultiIndex{0, 3}, iq(-1, 12));
  want.add_term(1, MultiIndex{2, 1}, iq(1, 4));
  want.add_term(1, MultiIndex{3, 0}, iq(1, 24));
  CHECK(h == want);
}

TEST_CASE("near-identity inverse round trip") {
  RandomFields rf(31);
  auto nf = compute_Rk(PerturbationSeries(osc(), {rf.field(2, 1, 3, 4), rf.field(2, 1, 3, 3)}), 2);
  NearIdentity T = near_identity(nf);
  for (int t = 0; t < 50; ++t) {
    CVector z = rf.point(2, 1.0);
    CHECK(max_diff(T.inverse(T.forward(z, 0.01), 0.01), z) < 1e-10);
  }
  NearIdentity wild({mono(2, 0, {2, 0}, gr(5)) + mono(2, 1, {0, 2}, gr(5))});
  CVector x = {Complex(3, 0), Complex(3, 0)};
  CHECK_THROWS_AS(wild.inverse(x, 1.0), InversionDiverged);
}

}  // TEST_SUITE
