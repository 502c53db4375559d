// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.
//
//   acceptance <path to rgnf> <path to unit_tests>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/bessel.hpp"
#include "oracles/numeric.hpp"
#include "rgnf/dynamics.hpp"
#include "rgnf/fixtures.hpp"
#include "rgnf/random_fields.hpp"
#include "rgnf/rg_core.hpp"
#include "rgnf/smooth_avg.hpp"

using namespace rgnf;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

GaussianRational gq(long p, long q) { return GaussianRational(Rational(p, q)); }
GaussianRational giq(long p, long q) { return GaussianRational(Rational(0), Rational(p, q)); }

CVector conjugated(const DiagLinearPart& A, const PolyVF& F, double s, std::span<const Complex> x) {
  return A.flow(-s, F.eval(A.flow(s, x)));
}

// 1. Operator identities on 200 random systems, seed 0.
Outcome operator_identities() {
  auto t0 = Clock::now();
  RandomFields rf(0);
  int exact_fail = 0, trials = 200;
  double worst_numeric = 0.0;
  for (int t = 0; t < trials; ++t) {
    DiagLinearPart A = rf.eigenvalues(rf.integer(1, 3));
    PolyVF g = rf.field_in_VI(A, 1, 4, 4);
    PolyVF h = rf.field_in_VK(A, 1, 4, 3), h2 = rf.field_in_VK(A, 1, 4, 3);
    PolyVF F = pseudo_inverse_Q(A, g);
    bool ok = project_K(A, F).is_zero();
    ok = ok && pseudo_inverse_Q(A, jacobian_apply(g, F) + jacobian_apply(F, g)) ==
                   project_I(A, jacobian_apply(F, F));
    ok = ok && project_I(A, jacobian_apply(h, h2)).is_zero() &&
         project_I(A, lie_bracket(h, h2)).is_zero();
    PolyVF a = jacobian_apply(g, h), b = jacobian_apply(h, g), c = lie_bracket(g, h);
    ok = ok && project_K(A, a).is_zero() && pseudo_inverse_Q(A, a) == jacobian_apply(F, h);
    ok = ok && project_K(A, b).is_zero() && pseudo_inverse_Q(A, b) == jacobian_apply(h, F);
    ok = ok && project_K(A, c).is_zero() && pseudo_inverse_Q(A, c) == lie_bracket(F, h);
    exact_fail += !ok;
  }
  DiagLinearPart A = fixtures::oscillator_A();
  for (int t = 0; t < trials; ++t) {
    PolyVF g = rf.field_in_VI(A, 1, 4, 4);
    PolyVF F = pseudo_inverse_Q(A, g);
    CVector x = rf.point(2, 0.5);
    double s = rf.uniform(0.0, 2 * M_PI);
    const double step = 1e-5;
    CVector p = conjugated(A, F, s + step, x), m = conjugated(A, F, s - step, x);
    CVector want = conjugated(A, g, s, x);
    for (int i = 0; i < 2; ++i)
      worst_numeric = std::max(worst_numeric, std::abs((p[i] - m[i]) / (2 * step) - want[i]));
  }
  double secs = seconds_since(t0);
  bool pass = exact_fail == 0 && worst_numeric < 1e-9 && secs < 30.0;
  return {pass, std::to_string(trials - exact_fail) + "/" + std::to_string(trials) +
                    " exact trials, derivative identity residual " + fmt(worst_numeric) + ", " +
                    fmt(secs) + " s"};
}

// 2. First-order transform of the sine oscillator, degree <= 3.
Outcome transform_coefficients() {
  auto nf = compute_Rk(fixtures::example41_series(3), 1);
  const PolyVF& h = nf.QPI_Rk[0];
  struct Expect {
    int comp;
    MultiIndex q;
    GaussianRational c;
  };
  std::vector<Expect> want = {
      {0, MultiIndex{0, 1}, giq(1, 2)},  {0, MultiIndex{3, 0}, giq(1, 12)},
      {0, MultiIndex{1, 2}, giq(-1, 4)}, {0, MultiIndex{0, 3}, giq(-1, 24)},
      {1, MultiIndex{1, 0}, giq(-1, 2)}, {1, MultiIndex{3, 0}, giq(1, 24)},
      {1, MultiIndex{2, 1}, giq(1, 4)},  {1, MultiIndex{0, 3}, giq(-1, 12)},
  };
  int matched = 0;
  for (const auto& e : want) matched += h.coefficient(e.comp, e.q) == e.c;
  bool pass = matched == static_cast<int>(want.size()) && h.size() == want.size();
  return {pass, std::to_string(matched) + "/8 coefficients exact, " + std::to_string(h.size()) +
                    " terms in the transform"};
}

// 3. Averaged sine field against the Bessel series.
Outcome bessel_normal_form() {
  auto t0 = Clock::now();
  auto pf = PeriodicFlow::from(fixtures::oscillator_A());
  auto nf = first_order_nf(pf, as_function(fixtures::example41_g1()));
  double radial = 0.0, angular = 0.0;
  for (int k = 1; k <= 50; ++k) {
    double r = 0.1 * k;
    CVector y = {Complex(r), Complex(r)};
    PolarRates avg = polar_rates(y, nf.averaged(y));
    PolarRates full = polar_rates(y, nf.eval(y, 1.0));
    radial = std::max(radial, std::abs(avg.r_dot - oracle::bessel_j1(2 * r)));
    CVector w = nf.eval(y, 0.0);
    angular = std::max(angular, std::abs(polar_rates(y, w).theta_dot - 1.0));
    angular = std::max(angular, std::abs(full.theta_dot - 1.0));
  }
  double secs = seconds_since(t0);
  return {radial < 1e-8 && angular < 1e-10 && secs < 10.0,
          "radial error " + fmt(radial) + ", angular error " + fmt(angular) + ", " + fmt(secs) + " s"};
}

// (-1)^m / (m! (m+1)!)
Rational bessel_taylor(int m) {
  mpz_class f = 1;
  for (int k = 2; k <= m; ++k) f *= k;
  Rational r(mpz_class(m % 2 ? -1 : 1), f * f * (m + 1));
  r.canonicalize();
  return r;
}

// 4. Exact radial coefficients against the Taylor series of J1(2r).
Outcome bessel_taylor_consistency() {
  auto nf = compute_Rk(fixtures::example41_series(7), 1);
  const PolyVF& pk = nf.PK_Rk[0];
  std::string got;
  bool pass = pk.size() == 8;
  for (int m = 0; m <= 3; ++m) {
    GaussianRational c = pk.coefficient(0, MultiIndex{m + 1, m});
    pass = pass && c == GaussianRational(bessel_taylor(m)) &&
           pk.coefficient(1, MultiIndex{m, m + 1}) == c;
    got += (m ? ", " : "") + rational_to_string(c.re());
  }
  pass = pass && bessel_taylor(3) == Rational(-1, 144);
  return {pass, "radial coefficients {" + got + "}"};
}

// 5. Remainder order, discrepancy computed here with a plain RK4 loop.
Outcome remainder_order() {
  auto t0 = Clock::now();
  RandomFields rf(0);
  DiagLinearPart A = fixtures::oscillator_A();
  std::vector<PolyVF> g = {rf.field(2, 1, 3, 3), rf.field(2, 1, 3, 3), rf.field(2, 1, 3, 3)};
  PerturbationSeries ps(A, g);
  CVector z0 = rf.point(2, 0.5);
  const std::vector<double> eps = {1e-2, 5e-3, 2.5e-3};
  const int steps = 4096;
  const auto& lam = A.eigenvalues();
  bool pass = true;
  std::string detail;
  for (int m = 1; m <= 3; ++m) {
    auto nf = compute_Rk(ps, m);
    std::vector<double> err;
    for (double e : eps) {
      auto original = [&](const oracle::CV& x) {
        oracle::CV d = {lam[0] * x[0], lam[1] * x[1]};
        double ek = 1.0;
        for (const auto& gk : g) {
          ek *= e;
          CVector v = gk.eval(x);
          for (int i = 0; i < 2; ++i) d[i] += ek * v[i];
        }
        return d;
      };
      auto normal = [&](const oracle::CV& z) {
        oracle::CV d = {lam[0] * z[0], lam[1] * z[1]};
        double ek = 1.0;
        for (const auto& pk : nf.PK_Rk) {
          ek *= e;
          CVector v = pk.eval(z);
          for (int i = 0; i < 2; ++i) d[i] += ek * v[i];
        }
        return d;
      };
      auto transform = [&](const oracle::CV& z) {
        oracle::CV x = z;
        double ek = 1.0;
        for (const auto& h : nf.QPI_Rk) {
          ek *= e;
          CVector v = h.eval(z);
          for (int i = 0; i < 2; ++i) x[i] += ek * v[i];
        }
        return x;
      };
      oracle::CV z = z0, x = transform(z0);
      double worst = 0.0;
      for (int k = 0; k < steps; ++k) {
        x = oracle::rk4(original, x, 1.0 / steps, 1);
        z = oracle::rk4(normal, z, 1.0 / steps, 1);
        oracle::CV xz = transform(z);
        worst = std::max({worst, std::abs(x[0] - xz[0]), std::abs(x[1] - xz[1])});
      }
      err.push_back(worst);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      double lx = std::log(eps[k]), ly = std::log(err[k]);
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    double n = static_cast<double>(eps.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    pass = pass && std::abs(slope - (m + 1)) <= 0.4;
    detail += (m > 1 ? ", " : "") + std::string("m=") + std::to_string(m) + " slope " + fmt(slope);
  }
  double secs = seconds_since(t0);
  pass = pass && secs < 60.0;
  return {pass, detail + ", " + fmt(secs) + " s"};
}

// 6. Perturbation hierarchy: exact residuals, the closed form of x_2, and a
// numeric time-derivative check of x_1 and x_2.
Outcome hierarchy() {
  RandomFields rf(0);
  DiagLinearPart A = fixtures::oscillator_A();
  PolyVF g1 = rf.field(2, 1, 3, 4), g2 = rf.field(2, 1, 3, 3), g3 = rf.field(2, 1, 2, 2);
  PerturbationSeries ps(A, {g1, g2, g3});
  auto nf = compute_Rk(ps, 3);
  bool exact = true;
  for (int i = 1; i <= 3; ++i) exact = exact && hierarchy_residual(ps, nf, i).is_zero();

  PolyVF K = project_K(A, g1), Qg = pseudo_inverse_Q(A, project_I(A, g1));
  PolyVF R2 = jacobian_apply(g1, Qg) + g2 - jacobian_apply(Qg, K);
  auto s2 = perturbation_solution(nf, 2);
  bool closed = s2.initial == pseudo_inverse_Q(A, project_I(A, R2)) && s2.secular.size() >= 2 &&
                s2.secular[0] == project_K(A, R2) + jacobian_apply(Qg, K) &&
                s2.secular[1] == jacobian_apply(K, K).scaled(gq(1, 2));
  for (std::size_t j = 2; j < s2.secular.size(); ++j) closed = closed && s2.secular[j].is_zero();

  auto s1 = perturbation_solution(nf, 1);
  double worst = 0.0;
  const double dt = 1e-5;
  for (int k = 0; k < 20; ++k) {
    CVector y = rf.point(2, 0.6);
    double t = rf.uniform(0.0, 3.0);
    CVector x0 = A.flow(t, y), x1 = s1.eval(t, y);
    // dx_1/dt = A x_1 + g_1(x_0)
    CVector d1p = s1.eval(t + dt, y), d1m = s1.eval(t - dt, y), gx = g1.eval(x0);
    // dx_2/dt = A x_2 + Dg_1(x_0) x_1 + g_2(x_0), Dg_1 by differences
    CVector d2p = s2.eval(t + dt, y), d2m = s2.eval(t - dt, y), x2 = s2.eval(t, y);
    CVector xp = x0, xm = x0;
    for (int i = 0; i < 2; ++i) xp[i] += dt * x1[i], xm[i] -= dt * x1[i];
    CVector gp = g1.eval(xp), gm = g1.eval(xm), g2x = g2.eval(x0);
    const auto& lam = A.eigenvalues();
    for (int i = 0; i < 2; ++i) {
      Complex r1 = (d1p[i] - d1m[i]) / (2 * dt) - lam[i] * x1[i] - gx[i];
      Complex r2 = (d2p[i] - d2m[i]) / (2 * dt) - lam[i] * x2[i] - (gp[i] - gm[i]) / (2 * dt) - g2x[i];
      worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
  }
  bool pass = exact && closed && worst < 1e-6;
  return {pass, std::string("exact residuals ") + (exact ? "zero" : "nonzero") + ", x_2 closed form " +
                    (closed ? "matches" : "differs") + ", numeric derivative residual " + fmt(worst)};
}

// 7. Periodic orbits of the sine oscillator at the Bessel zeros.
Outcome invariant_circles() {
  auto f = fixtures::example41_real(0.1);
  auto sec = fixtures::oscillator_section();
  auto chart = fixtures::oscillator_chart();
  double z1 = oracle::bessel_j1_zero(1) / 2, z2 = oracle::bessel_j1_zero(2) / 2;
  try {
    OrbitReport a = find_periodic_orbit(f, sec, chart, 1.5, 2.3);
    OrbitReport b = find_periodic_orbit(f, sec, chart, 3.2, 3.9);
    bool located = std::abs(a.r_star - z1) < 0.05 && std::abs(b.r_star - z2) < 0.05;
    bool alternating = (std::abs(a.mu) < 1) != (std::abs(b.mu) < 1);
    bool slope_sign = (oracle::bessel_j1_prime(2 * z1) < 0) == (std::abs(a.mu) < 1) &&
                      (oracle::bessel_j1_prime(2 * z2) < 0) == (std::abs(b.mu) < 1);
    return {located && alternating && slope_sign,
            "r* = " + fmt(a.r_star) + " (" + a.classification + ", mu " + fmt(a.mu) + "), " +
                fmt(b.r_star) + " (" + b.classification + ", mu " + fmt(b.mu) + "); oracle " +
                fmt(z1) + ", " + fmt(z2)};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

// 8. Mollified sawtooth: zeros of R(r) and the orbit near r = 1.
Outcome sawtooth() {
  auto g = expr::MollifiedPiecewise::alternating(fixtures::kDefaultDelta);
  auto R = [&](double r) {
    return oracle::simpson([&](double t) { return std::cos(t) * g.value(2 * r * std::cos(t)); }, 0.0,
                           2 * M_PI, 1 << 14);
  };
  std::string detail = "R sign changes near";
  bool zeros = true;
  for (int n = 1; n <= 3; ++n) {
    bool found = false;
    double prev = R(n - 0.2);
    for (double r = n - 0.19; r <= n + 0.2 + 1e-12 && !found; r += 0.01) {
      double v = R(r);
      if ((prev > 0) != (v > 0)) {
        found = true;
        detail += " " + fmt(r);
      }
      prev = v;
    }
    zeros = zeros && found;
  }
  try {
    OrbitReport o = find_periodic_orbit(fixtures::example42_real(0.05), fixtures::oscillator_section(),
                                        fixtures::oscillator_chart(), 0.6, 1.4);
    bool attracting = std::abs(o.mu) < 1;
    detail += "; orbit r* = " + fmt(o.r_star) + " mu = " + fmt(o.mu) + " (" + o.classification + ")";
    return {zeros && attracting, detail};
  } catch (const std::exception& e) {
    return {false, detail + "; orbit search failed: " + e.what()};
  }
}

int run_status(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& cmd) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), pipe.get())) out += buf.data();
  return out;
}

// One unit test case per invariant or property.
const std::vector<std::string> kManifest = {
    "rationals stay in lowest terms with positive denominators",
    "JSON round trip is the identity and keeps canonical order",
    "zero coefficients are never stored",
    "jacobian_apply degree bound and bilinearity",
    "jacobian_apply agrees with a float Jacobian at random points",
    "lie_bracket antisymmetry and Jacobi identity",
    "substitute edge cases",
    "projections: examples and algebra",
    "Q inverts L_A on V_I and kills the resonant part",
    "Q and the D g.Qg identity on V_I",
    "conjugated Q g has derivative equal to conjugated g",
    "V_K is closed under D and bracket",
    "mixed V_I and V_K products commute with Q",
    "bracket of two V_I fields can leave V_I",
    "remainder scaling follows the order law",
    "hierarchy equations hold exactly",
    "normal form terms are equivariant",
    "graded input gives homogeneous resonant terms",
    "taylor of a polynomial expression round trips",
    "taylor remainder is bounded by the next term",
    "mollified sawtooth is odd and equals the raw function off the windows",
    "average commutes with the flow",
    "numeric averages agree with exact projections",
    "doubling the sample count leaves the sine averages unchanged",
    "finite-time integral splits into oscillating and secular parts",
    "period of the linear flow",
    "Fourier table: mean and energy balance",
    "fixed-step RK4 is fourth order",
    "periodic orbits of the sine oscillator sit at the Bessel zeros",
    "identical runs give byte-identical reports",
    "exit codes",
};

// 9. Every property has a test, and `verify all` exits 0 within 3 minutes.
Outcome coverage(const std::string& cli, const std::string& unit) {
  std::string listing = capture(unit + " --list-test-cases 2>/dev/null");
  std::set<std::string> names;
  std::istringstream ss(listing);
  for (std::string line; std::getline(ss, line);) names.insert(line);
  std::vector<std::string> missing;
  for (const auto& n : kManifest)
    if (!names.count(n)) missing.push_back(n);

  auto t0 = Clock::now();
  std::string dir = "/tmp/rgnf_acceptance_verify";
  int rc = run_status(cli + " verify all --out " + dir + " >/dev/null 2>&1");
  double secs = seconds_since(t0);
  std::string detail = std::to_string(kManifest.size() - missing.size()) + "/" +
                       std::to_string(kManifest.size()) + " properties covered";
  for (const auto& m : missing) detail += " [missing: " + m + "]";
  detail += ", verify all exit " + std::to_string(rc) + " in " + fmt(secs) + " s";
  return {missing.empty() && rc == 0 && secs < 180.0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <rgnf> <unit_tests>\n";
    return 2;
  }
  const std::string cli = argv[1], unit = argv[2];
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"operator identities", operator_identities},
      {"first-order transform coefficients", transform_coefficients},
      {"Bessel normal form", bessel_normal_form},
      {"Bessel-Taylor consistency", bessel_taylor_consistency},
      {"remainder order", remainder_order},
      {"perturbation hierarchy", hierarchy},
      {"invariant circles of the sine oscillator", invariant_circles},
      {"mollified sawtooth", sawtooth},
      {"coverage and verify", [&] { return coverage(cli, unit); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first
              << " (" << o.detail << ")" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
