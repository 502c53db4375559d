#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rgnf/errors.hpp"
#include "rgnf/random_fields.hpp"
#include "rgnf/spectra.hpp"

using namespace rgnf;
using namespace testutil;

namespace {

DiagLinearPart osc() { return DiagLinearPart::exact({gr(0, 1), gr(0, -1)}); }

// e^{-As} F(e^{As} x)
CVector conjugated(const DiagLinearPart& A, const PolyVF& F, double s, std::span<const Complex> x) {
  return A.flow(-s, F.eval(A.flow(s, x)));
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("lie_derivative examples") {
  DiagLinearPart A = osc();
  CHECK(lie_derivative(A, mono(2, 0, {2, 1}, gr(1))).is_zero());
  CHECK(lie_derivative(A, mono(2, 1, {2, 0}, gr(1))) == mono(2, 1, {2, 0}, gr(0, 3)));
  DiagLinearPart R = DiagLinearPart::exact({gr(1), gr(2)});
  CHECK(lie_derivative(R, mono(2, 1, {2, 0}, gr(1))).is_zero());
}

TEST_CASE("lie_derivative equals Df.Ax - Af") {
  RandomFields rf(11);
  for (int k = 0; k < 50; ++k) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    int n = A.dim();
    PolyVF f = rf.field(n, 0, 4, 5);
    std::vector<GaussianRational> M(n * n, gr(0));
    for (int i = 0; i < n; ++i) M[i * n + i] = A.exact_eigenvalues()[i];
    PolyVF Ax = PolyVF::linear(n, M);
    PolyVF Af(n);
    for (const auto& t : f.terms()) Af.add_term(t.comp, t.exp, A.exact_eigenvalues()[t.comp] * t.coeff);
    CHECK(lie_derivative(A, f) == jacobian_apply(f, Ax) - Af);
  }
}

TEST_CASE("classify examples") {
  DiagLinearPart A = osc();
  auto c = classify(A, mono(2, 0, {1, 0}, gr(1)) + mono(2, 0, {0, 1}, gr(1)));
  REQUIRE(c.size() == 2);
  for (const auto& e : c) {
    if (e.exp == MultiIndex{1, 0}) {
      CHECK(e.resonant);
      CHECK(e.factor.is_zero());
    } else {
      CHECK_FALSE(e.resonant);
      CHECK(e.factor == gr(0, -2));
    }
  }
  CHECK(classify(A, PolyVF(2)).empty());

  PolyVF cubic(2);
  for (const auto& qq : monomials_of_degree(2, 3)) cubic.add_term(0, qq, gr(1));
  int resonant = 0;
  for (const auto& e : classify(A, cubic)) {
    bool expect = e.exp[0] - e.exp[1] == 1;
    CHECK(e.resonant == expect);
    resonant += e.resonant;
  }
  CHECK(resonant == 1);
}

TEST_CASE("projections: examples and algebra") {
  DiagLinearPart A = osc();
  PolyVF f = mono(2, 0, {1, 0}, gr(1)) + mono(2, 0, {0, 1}, gr(1));
  CHECK(project_K(A, f) == mono(2, 0, {1, 0}, gr(1)));
  CHECK(project_I(A, f) == mono(2, 0, {0, 1}, gr(1)));
  PolyVF k = mono(2, 0, {2, 1}, gr(3)) + mono(2, 1, {1, 2}, gr(0, 1));
  CHECK(project_K(A, k) == k);
  CHECK(project_I(A, k).is_zero());

  RandomFields rf(12);
  for (int t = 0; t < 200; ++t) {
    DiagLinearPart B = rf.eigenvalues(rf.integer(1, 3));
    PolyVF g = rf.field(B.dim(), 0, 4, 6);
    PolyVF pk = project_K(B, g), pi = project_I(B, g);
    CHECK(project_K(B, pk) == pk);
    CHECK(project_I(B, pi) == pi);
    CHECK(project_K(B, pi).is_zero());
    CHECK(project_I(B, pk).is_zero());
    CHECK(pk + pi == g);
    CHECK(in_VK(B, pk));
    CHECK(in_VI(B, pi));
  }
}

TEST_CASE("pseudo_inverse_Q examples") {
  DiagLinearPart A = osc();
  CHECK(pseudo_inverse_Q(A, mono(2, 0, {0, 1}, gr(1))) == mono(2, 0, {0, 1}, iq(1, 2)));
  CHECK(pseudo_inverse_Q(A, mono(2, 0, {3, 0}, gr(5))) == mono(2, 0, {3, 0}, iq(-5, 2)));
  CHECK_THROWS_AS(pseudo_inverse_Q(A, mono(2, 0, {1, 0}, gr(1))), ResonantInput);
}

TEST_CASE("Q inverts L_A on V_I and kills the resonant part") {
  RandomFields rf(13);
  for (int t = 0; t < 200; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    PolyVF g = rf.field_in_VI(A, 1, 4, 5);
    PolyVF Qg = pseudo_inverse_Q(A, g);
    CHECK(lie_derivative(A, Qg) == g);
    CHECK(pseudo_inverse_Q(A, lie_derivative(A, g)) == g);
    CHECK(project_K(A, Qg).is_zero());
  }
}

TEST_CASE("Q and the D g.Qg identity on V_I") {
  RandomFields rf(14);
  for (int t = 0; t < 200; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    PolyVF g = rf.field_in_VI(A, 1, 4, 3);
    PolyVF Qg = pseudo_inverse_Q(A, g);
    PolyVF lhs = pseudo_inverse_Q(A, project_I(A, jacobian_apply(g, Qg) + jacobian_apply(Qg, g)));
    // The argument must already lie in V_I.
    CHECK(project_K(A, jacobian_apply(g, Qg) + jacobian_apply(Qg, g)).is_zero());
    CHECK(lhs == project_I(A, jacobian_apply(Qg, Qg)));
  }
}

TEST_CASE("conjugated Q g has derivative equal to conjugated g") {
  RandomFields rf(15);
  DiagLinearPart A = osc();
  for (int t = 0; t < 100; ++t) {
    PolyVF g = rf.field_in_VI(A, 1, 4, 4);
    PolyVF Qg = pseudo_inverse_Q(A, g);
    CVector x = rf.point(2, 0.5);
    double s = rf.uniform(0.0, 2 * M_PI);
    const double h = 1e-5;
    CVector p = conjugated(A, Qg, s + h, x), m = conjugated(A, Qg, s - h, x);
    CVector want = conjugated(A, g, s, x);
    for (int i = 0; i < 2; ++i) CHECK(std::abs((p[i] - m[i]) / (2 * h) - want[i]) < 1e-9);
  }
}

TEST_CASE("V_K is closed under D and bracket") {
  RandomFields rf(16);
  int nonzero = 0;
  for (int t = 0; t < 200; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    PolyVF g = rf.field_in_VK(A, 0, 4, 3), h = rf.field_in_VK(A, 0, 4, 3);
    PolyVF d = jacobian_apply(g, h);
    nonzero += !d.is_zero();
    CHECK(project_I(A, d).is_zero());
    CHECK(project_I(A, lie_bracket(g, h)).is_zero());
  }
  CHECK(nonzero > 20);
}

TEST_CASE("mixed V_I and V_K products commute with Q") {
  RandomFields rf(17);
  for (int t = 0; t < 200; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    PolyVF g = rf.field_in_VI(A, 0, 4, 3), h = rf.field_in_VK(A, 0, 4, 3);
    PolyVF Qg = pseudo_inverse_Q(A, g);
    PolyVF a = jacobian_apply(g, h), b = jacobian_apply(h, g), c = lie_bracket(g, h);
    CHECK(in_VI(A, a));
    CHECK(in_VI(A, b));
    CHECK(in_VI(A, c));
    CHECK(pseudo_inverse_Q(A, a) == jacobian_apply(Qg, h));
    CHECK(pseudo_inverse_Q(A, b) == jacobian_apply(h, Qg));
    CHECK(pseudo_inverse_Q(A, c) == lie_bracket(Qg, h));
  }
}

TEST_CASE("bracket of two V_I fields can leave V_I") {
  RandomFields rf(18);
  DiagLinearPart A = osc();
  bool found = false;
  for (int t = 0; t < 500 && !found; ++t) {
    PolyVF f = rf.field_in_VI(A, 1, 3, 3), g = rf.field_in_VI(A, 1, 3, 3);
    found = !project_K(A, lie_bracket(f, g)).is_zero();
  }
  CHECK(found);
}

TEST_CASE("numeric mode: tolerance, classification, rejection of exact operators") {
  DiagLinearPart A = DiagLinearPart::numeric({Complex(0, 1), Complex(0, -1 + 1e-14)});
  CHECK(A.tolerance() == doctest::Approx(1e-12));
  CHECK(A.is_resonant(0, MultiIndex{2, 1}));
  CHECK_FALSE(A.is_resonant(0, MultiIndex{0, 1}));
  DiagLinearPart B = DiagLinearPart::numeric({Complex(0, 1), Complex(0, -1.001)});
  CHECK_FALSE(B.is_resonant(0, MultiIndex{2, 1}));
  PolyVF f = mono(2, 0, {2, 1}, gr(1)) + mono(2, 0, {0, 1}, gr(1));
  CHECK(project_K(A, f) == mono(2, 0, {2, 1}, gr(1)));
  CHECK_THROWS(pseudo_inverse_Q(A, mono(2, 0, {0, 1}, gr(1))));
  auto report = resonance_report(A, f);
  CHECK(report.dump().find("tolerance") != std::string::npos);
}

TEST_CASE("non-diagonal matrices are rejected") {
  std::vector<GaussianRational> M = {gr(0), gr(1), gr(-1), gr(0)};
  CHECK_THROWS_AS(DiagLinearPart::from_matrix(2, M), NotDiagonal);
  std::vector<GaussianRational> D = {gr(0, 1), gr(0), gr(0), gr(0, -1)};
  CHECK(DiagLinearPart::from_matrix(2, D).exact_eigenvalues() == osc().exact_eigenvalues());
  CHECK_THROWS_AS(lie_derivative(osc(), PolyVF(3)), DimensionMismatch);
}

TEST_CASE("resonance report lists every monomial") {
  auto report = resonance_report(osc(), mono(2, 0, {1, 0}, gr(1)) + mono(2, 0, {0, 1}, gr(1)));
  const auto& list = report.contains("monomials") ? report["monomials"] : report;
  REQUIRE(list.size() == 2);
  for (const auto& e : list) {
    CHECK(e.contains("comp"));
    CHECK(e.contains("exp"));
    CHECK(e.contains("factor_re"));
    CHECK(e.contains("factor_im"));
    CHECK(e.contains("resonant"));
  }
}

}  // TEST_SUITE
