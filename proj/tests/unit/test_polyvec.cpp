#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rgnf/errors.hpp"
#include "rgnf/expr.hpp"
#include "rgnf/random_fields.hpp"

using namespace rgnf;
using namespace testutil;

TEST_SUITE("polyvec") {

TEST_CASE("rationals stay in lowest terms with positive denominators") {
  GaussianRational a(Rational(2, -4), Rational(6, 8));
  CHECK(a.re().get_den() > 0);
  CHECK(a.re() == Rational(-1, 2));
  CHECK(a.im() == Rational(3, 4));
  RandomFields rf(3);
  for (int k = 0; k < 200; ++k) {
    GaussianRational x = rf.gaussian(), y = rf.gaussian();
    for (const auto& z : {x + y, x - y, x * y, x * y.inverse()}) {
      CHECK(z.re().get_den() > 0);
      CHECK(z.im().get_den() > 0);
      CHECK(gcd(z.re().get_num(), z.re().get_den()) == 1);
      CHECK(gcd(z.im().get_num(), z.im().get_den()) == 1);
    }
  }
}

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(rational_to_string(Rational(3)) == "3/1");
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
  CHECK(GaussianRational::i() * GaussianRational::i() == gr(-1));
}

TEST_CASE("add: identity, cancellation, doubling") {
  PolyVF f = mono(2, 0, {1, 0}, gr(1));
  CHECK(add(f, PolyVF(2)) == f);
  CHECK(add(f, -f).is_zero());
  CHECK(add(f, f) == mono(2, 0, {1, 0}, gr(2)));
  CHECK_THROWS_AS(add(f, PolyVF(3)), DimensionMismatch);
}

TEST_CASE("jacobian_apply examples") {
  // f = x1^2 e1, g = x1 e1
  CHECK(jacobian_apply(mono(1, 0, {2}, gr(1)), mono(1, 0, {1}, gr(1))) == mono(1, 0, {2}, gr(2)));

  // f linear: Df·g = B g
  std::vector<GaussianRational> B = {gr(1), gr(2), gr(0, 1), gr(-3)};
  PolyVF lin = PolyVF::linear(2, B);
  PolyVF g = mono(2, 0, {2, 1}, gr(5)) + mono(2, 1, {0, 3}, q(1, 3));
  PolyVF expect(2);
  for (const auto& t : g.terms())
    for (int r = 0; r < 2; ++r) expect.add_term(r, t.exp, B[r * 2 + t.comp] * t.coeff);
  CHECK(jacobian_apply(lin, g) == expect);

  // f = x1 x2 e1, g = x2 e1 + x1 e2 -> (x2^2 + x1^2) e1
  PolyVF f = mono(2, 0, {1, 1}, gr(1));
  PolyVF h = mono(2, 0, {0, 1}, gr(1)) + mono(2, 1, {1, 0}, gr(1));
  PolyVF r = jacobian_apply(f, h);
  CHECK(r == mono(2, 0, {0, 2}, gr(1)) + mono(2, 0, {2, 0}, gr(1)));
  RandomFields rf(1);
  for (int k = 0; k < 20; ++k) {
    CVector x = rf.point(2, 1.0);
    Complex want = x[1] * x[1] + x[0] * x[0];
    CHECK(std::abs(r.eval(x)[0] - want) < 1e-14);
  }
  CHECK_THROWS_AS(jacobian_apply(f, PolyVF(3)), DimensionMismatch);
}

TEST_CASE("jacobian_apply degree bound and bilinearity") {
  RandomFields rf(2);
  for (int k = 0; k < 50; ++k) {
    int dim = rf.integer(1, 3);
    PolyVF f = rf.field(dim, 1, 4, 4), g = rf.field(dim, 1, 4, 4), h = rf.field(dim, 0, 3, 3);
    PolyVF fg = jacobian_apply(f, g);
    if (!fg.is_zero()) CHECK(fg.degree() <= f.degree() + g.degree() - 1);
    GaussianRational a = rf.gaussian(), b = rf.gaussian();
    CHECK(jacobian_apply(f.scaled(a) + h.scaled(b), g) ==
          jacobian_apply(f, g).scaled(a) + jacobian_apply(h, g).scaled(b));
    CHECK(jacobian_apply(f, g.scaled(a) + h.scaled(b)) ==
          jacobian_apply(f, g).scaled(a) + jacobian_apply(f, h).scaled(b));
  }
}

TEST_CASE("jacobian_apply agrees with a float Jacobian at random points") {
  RandomFields rf(4);
  for (int k = 0; k < 30; ++k) {
    int dim = rf.integer(1, 3);
    PolyVF f = rf.field(dim, 1, 4, 5), g = rf.field(dim, 0, 3, 4);
    PolyVF fg = jacobian_apply(f, g);
    for (int p = 0; p < 20; ++p) {
      CVector x = rf.point(dim, 1.0);
      // Central differences of f along g(x), step 1e-6: Df·v.
      CVector v = g.eval(x), xp = x, xm = x;
      const double h = 1e-6;
      for (int i = 0; i < dim; ++i) xp[i] += h * v[i], xm[i] -= h * v[i];
      CVector fp = f.eval(xp), fm = f.eval(xm), got = fg.eval(x);
      double scale = 1.0;
      for (auto c : got) scale = std::max(scale, std::abs(c));
      for (int i = 0; i < dim; ++i)
        CHECK(std::abs((fp[i] - fm[i]) / (2 * h) - got[i]) < 1e-6 * scale);
    }
  }
}

TEST_CASE("lie_bracket antisymmetry and Jacobi identity") {
  RandomFields rf(5);
  for (int k = 0; k < 60; ++k) {
    int dim = rf.integer(1, 3);
    PolyVF f = rf.field(dim, 0, 4, 3), g = rf.field(dim, 0, 4, 3), h = rf.field(dim, 0, 4, 3);
    CHECK(lie_bracket(f, f).is_zero());
    CHECK(lie_bracket(f, g) == -lie_bracket(g, f));
    PolyVF jac = lie_bracket(f, lie_bracket(g, h)) + lie_bracket(g, lie_bracket(h, f)) +
                 lie_bracket(h, lie_bracket(f, g));
    CHECK(jac.is_zero());
  }
}

TEST_CASE("substitute reproduces the low-order composition formulas") {
  RandomFields rf(6);
  for (int k = 0; k < 20; ++k) {
    int dim = rf.integer(1, 3);
    PolyVF g1 = rf.field(dim, 1, 4, 4);
    PolyVF x0 = PolyVF::identity(dim);
    PolyVF x1 = rf.field(dim, 1, 2, 3), x2 = rf.field(dim, 1, 2, 3);
    std::vector<PolyVF> series = {x0, x1, x2};
    auto graded = substitute(g1, series, 2);
    REQUIRE(graded.size() == 3);
    CHECK(graded[0] == g1);
    CHECK(graded[1] == jacobian_apply(g1, x1));
    // ½ D²g1(x0)[x1, x1], built from second partials.
    PolyVF second(dim);
    for (int c = 0; c < dim; ++c) {
      Poly acc(dim);
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          acc += g1.component(c).derivative(a).derivative(b) * x1.component(a) * x1.component(b);
      for (const auto& [qq, cc] : acc.terms()) second.add_term(c, qq, cc * q(1, 2));
    }
    CHECK(graded[2] == second + jacobian_apply(g1, x2));
  }
}

TEST_CASE("substitute edge cases") {
  RandomFields rf(7);
  PolyVF f = rf.field(2, 0, 3, 5);
  PolyVF id = PolyVF::identity(2);
  auto single = substitute(f, std::span<const PolyVF>(&id, 1), 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == f);
  // A single-entry series is plain composition.
  PolyVF s = rf.field(2, 1, 2, 3);
  auto comp = substitute(f, std::span<const PolyVF>(&s, 1), 0);
  CVector x = rf.point(2, 0.7);
  CHECK(max_diff(comp[0].eval(x), f.eval(s.eval(x))) < 1e-12);
  // With the identity series the higher grades vanish.
  std::vector<PolyVF> series = {id, PolyVF(2), PolyVF(2)};
  auto graded = substitute(f, series, 2);
  CHECK(graded[0] == f);
  CHECK(graded[1].is_zero());
  CHECK(graded[2].is_zero());
  CHECK_THROWS_AS(substitute(f, series, -1), OrderOutOfRange);
  PolyVF bad(3);
  CHECK_THROWS_AS(substitute(f, std::span<const PolyVF>(&bad, 1), 0), DimensionMismatch);
}

TEST_CASE("truncate") {
  PolyVF f = mono(1, 0, {1}, gr(1)) + mono(1, 0, {3}, gr(1));
  CHECK(truncate(f, 1) == mono(1, 0, {1}, gr(1)));
  CHECK(truncate(f, f.degree()) == f);
  expr::ParseOptions po;
  po.dim = 1;
  PolyVF s7 = expr::taylor(expr::parse("sin(x1)", po), 7);
  CHECK(truncate(s7, 3) == mono(1, 0, {1}, gr(1)) + mono(1, 0, {3}, q(-1, 6)));
}

TEST_CASE("JSON round trip is the identity and keeps canonical order") {
  RandomFields rf(8);
  for (int k = 0; k < 100; ++k) {
    int dim = rf.integer(1, 4);
    PolyVF f = rf.field(dim, 0, 4, 6);
    auto j = to_json(f);
    CHECK(polyvf_from_json(j) == f);
    CHECK(polyvf_from_json(nlohmann::json::parse(j.dump())) == f);
    const auto& terms = j["terms"];
    for (std::size_t t = 0; t < terms.size(); ++t) {
      CHECK(terms[t]["re"].get<std::string>().find('/') != std::string::npos);
      CHECK(terms[t]["re"].get<std::string>().find('.') == std::string::npos);
      CHECK(terms[t]["exp"].size() == static_cast<std::size_t>(dim));
    }
    auto ordered = f.terms();
    for (std::size_t t = 1; t < ordered.size(); ++t) {
      const auto& a = ordered[t - 1];
      const auto& b = ordered[t];
      bool before = a.exp.degree() < b.exp.degree() ||
                    (a.exp.degree() == b.exp.degree() &&
                     (a.exp.to_vector() < b.exp.to_vector() ||
                      (a.exp.to_vector() == b.exp.to_vector() && a.comp < b.comp)));
      CHECK(before);
    }
  }
}

TEST_CASE("zero coefficients are never stored") {
  PolyVF f = mono(2, 0, {1, 1}, gr(3));
  f.add_term(0, MultiIndex{1, 1}, gr(-3));
  CHECK(f.is_zero());
  CHECK(f.size() == 0);
  CHECK(to_json(f)["terms"].empty());
}

TEST_CASE("multi-index bookkeeping") {
  MultiIndex m{2, 0, 1};
  CHECK(m.dim() == 3);
  CHECK(m.degree() == 3);
  CHECK(monomials_of_degree(2, 3).size() == 4);
  CHECK(monomials_of_degree(3, 2).size() == 6);
  CHECK_THROWS(MultiIndex(std::vector<int>(17, 0)));
}

}  // TEST_SUITE
