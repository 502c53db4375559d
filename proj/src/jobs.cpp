#include "rgnf/jobs.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rgnf/dynamics.hpp"
#include "rgnf/errors.hpp"
#include "rgnf/smooth_avg.hpp"
#include "rgnf/verify.hpp"

namespace rgnf {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ostream& out_of(const RunOptions& r) { return r.out ? *r.out : std::cout; }
std::ostream& err_of(const RunOptions& r) { return r.err ? *r.err : std::cerr; }

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json vector_json(std::span<const Complex> v) {
  json a = json::array();
  for (auto c : v) a.push_back(complex_json(c));
  return a;
}

// Emits the main report to --out (as `name`) or stdout.
void emit(const RunOptions& run, const std::string& name, const std::string& content) {
  if (run.out_dir)
    write_file(fs::path(*run.out_dir) / name, content);
  else
    out_of(run) << content;
}

const char* extension(OutputFormat f) {
  switch (f) {
    case OutputFormat::json:
      return "json";
    case OutputFormat::text:
      return "txt";
    case OutputFormat::latex:
      return "tex";
  }
  return "json";
}

// --------------------------------------------------------------------- nf

int nf_poly(const JobConfig& c, const RunOptions& run) {
  auto ps = c.taylor_series();
  int order = run.order.value_or(c.order);
  std::optional<int> cap = c.options.degree_cap ? c.options.degree_cap : c.options.taylor_degree;
  auto nf = compute_Rk(ps, order, cap);

  json resonance = json::array();
  for (int k = 1; k <= nf.order; ++k)
    resonance.push_back({{"order", k}, {"terms", resonance_report(nf.A, nf.Rk[k - 1])}});

  std::string main;
  if (run.format == OutputFormat::json) {
    json j = normal_form_json(nf);
    j["mode"] = "poly";
    j["taylor_degree"] = c.options.taylor_degree;
    j["resonance_report"] = resonance;
    main = dump(j);
  } else if (run.format == OutputFormat::text) {
    main = normal_form_text(nf);
  } else {
    main = normal_form_latex(nf);
  }
  emit(run, std::string("normal_form.") + extension(run.format), main);
  if (run.out_dir) write_file(fs::path(*run.out_dir) / "resonance.json", dump(resonance));
  return kExitOk;
}

int nf_cinf(const JobConfig& c, const RunOptions& run) {
  int order = run.order.value_or(c.order);
  if (order > 2) throw ConfigError("the averaging engine provides orders 1 and 2; use mode poly");
  if (c.perturbation.empty()) throw ConfigError("perturbation needs at least one order");
  auto pf = PeriodicFlow::from(c.A, c.options.samples, c.options.base_frequency,
                               c.options.allow_long_time_average);
  auto params = c.numeric_parameters();
  auto g1 = as_function(c.perturbation[0], params);
  const expr::VectorFieldDef* g2 = c.perturbation.size() > 1 ? &c.perturbation[1] : nullptr;

  std::vector<CVector> points = c.options.points;
  bool polar = points.empty();
  if (polar) {
    if (c.dim != 2) throw ConfigError("options.points is required unless dim = 2");
    int n = c.options.r_count;
    for (int k = 0; k < n; ++k) {
      double r = n == 1 ? c.options.r_min
                        : c.options.r_min + (c.options.r_max - c.options.r_min) * k / (n - 1);
      points.push_back({r, r});
    }
  }

  json grid = json::array();
  std::ostringstream text;
  text.precision(12);
  if (polar) text << "# r  r_dot/eps  theta_dot/eps" << (order == 2 ? "  r_dot/eps^2  theta_dot/eps^2" : "") << "\n";
  for (const auto& y : points) {
    CVector pk = average_PK(pf, g1, y);
    CVector qpi = qpi_evaluate(pf, g1, y);
    json e = {{"point", vector_json(y)}, {"PK", vector_json(pk)}, {"QPI", vector_json(qpi)}};
    PolarRates p1{}, p2{};
    if (polar) {
      p1 = polar_rates(y, pk);
      e["r"] = y[0].real();
      e["r_dot_per_eps"] = p1.r_dot;
      e["theta_dot_per_eps"] = p1.theta_dot;
    }
    if (order == 2) {
      CVector pk2 = second_order_term(pf, c.perturbation[0], g2, y, params);
      e["PK_R2"] = vector_json(pk2);
      if (polar) {
        p2 = polar_rates(y, pk2);
        e["r_dot_per_eps2"] = p2.r_dot;
        e["theta_dot_per_eps2"] = p2.theta_dot;
      }
    }
    if (polar) {
      text << y[0].real() << "  " << p1.r_dot << "  " << p1.theta_dot;
      if (order == 2) text << "  " << p2.r_dot << "  " << p2.theta_dot;
      text << "\n";
    }
    grid.push_back(e);
  }

  std::string main;
  if (run.format == OutputFormat::json) {
    json j = {{"mode", "cinf"},
              {"order", order},
              {"period", pf.period()},
              {"samples", pf.samples()},
              {"frequencies", pf.frequencies()},
              {"grid", grid},
              {"averaging_report", averaging_report(pf, g1, points.front())}};
    if (!pf.warning().empty()) j["warning"] = pf.warning();
    main = dump(j);
  } else if (run.format == OutputFormat::text) {
    std::ostringstream os;
    os << "averaged normal form, period " << pf.period() << ", " << pf.samples() << " samples\n";
    if (!pf.warning().empty()) os << "warning: " << pf.warning() << "\n";
    os << (polar ? text.str() : grid.dump(2) + "\n");
    main = os.str();
  } else {
    std::ostringstream os;
    os.precision(10);
    os << "\\begin{tabular}{rrr}\n$r$ & $\\dot r/\\varepsilon$ & $\\dot\\theta/\\varepsilon$ \\\\\n\\hline\n";
    for (const auto& e : grid)
      if (e.contains("r"))
        os << e["r"].get<double>() << " & " << e["r_dot_per_eps"].get<double>() << " & "
           << e["theta_dot_per_eps"].get<double>() << " \\\\\n";
    os << "\\end{tabular}\n";
    main = os.str();
  }
  emit(run, std::string("normal_form.") + extension(run.format), main);
  if (run.out_dir && polar) write_file(fs::path(*run.out_dir) / "averaged_field.csv", [&] {
    std::ostringstream os;
    os.precision(17);
    os << "r,r_dot_per_eps,theta_dot_per_eps\n";
    for (const auto& e : grid)
      os << e["r"].get<double>() << "," << e["r_dot_per_eps"].get<double>() << ","
         << e["theta_dot_per_eps"].get<double>() << "\n";
    return os.str();
  }());
  return kExitOk;
}

// --------------------------------------------------------------- simulate

// Solves T z = x by Gaussian elimination with partial pivoting.
CVector solve(std::vector<Complex> T, CVector x) {
  int n = static_cast<int>(x.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(T[r * n + col]) > std::abs(T[piv * n + col])) piv = r;
    if (std::abs(T[piv * n + col]) < 1e-14) throw ConfigError("real_basis is singular");
    for (int k = 0; k < n; ++k) std::swap(T[col * n + k], T[piv * n + k]);
    std::swap(x[col], x[piv]);
    for (int r = col + 1; r < n; ++r) {
      Complex f = T[r * n + col] / T[col * n + col];
      for (int k = col; k < n; ++k) T[r * n + k] -= f * T[col * n + k];
      x[r] -= f * x[col];
    }
  }
  CVector z(n);
  for (int r = n - 1; r >= 0; --r) {
    Complex acc = x[r];
    for (int k = r + 1; k < n; ++k) acc -= T[r * n + k] * z[k];
    z[r] = acc / T[r * n + r];
  }
  return z;
}

CVector apply_basis(const std::optional<std::vector<Complex>>& T, std::span<const Complex> z) {
  if (!T) return CVector(z.begin(), z.end());
  int n = static_cast<int>(z.size());
  CVector x(n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) x[r] += (*T)[r * n + k] * z[k];
  return x;
}

Trajectory mapped(const Trajectory& tr, const std::function<CVector(std::span<const Complex>)>& f) {
  Trajectory out = tr;
  for (auto& x : out.x) x = f(x);
  return out;
}

bool has_imaginary_part(const Trajectory& tr) {
  for (const auto& x : tr.x)
    for (auto c : x)
      if (std::abs(c.imag()) > 1e-9 * (1.0 + std::abs(c.real()))) return true;
  return false;
}

int simulate(const JobConfig& c, const RunOptions& run) {
  const auto& o = c.options;
  if (!o.x0) throw ConfigError("simulate needs options.x0");
  if (static_cast<int>(o.x0->size()) != c.dim)
    throw ConfigError("x0 has " + std::to_string(o.x0->size()) + " entries, dim is " +
                      std::to_string(c.dim));
  int order = run.order.value_or(c.order);
  std::vector<double> eps_list = run.eps.value_or(o.eps);
  CVector x0 = o.real_basis ? solve(*o.real_basis, *o.x0) : *o.x0;
  auto params = c.numeric_parameters();

  std::vector<VectorFunction> g;
  for (const auto& vf : c.perturbation) g.push_back(as_function(vf, params));
  const auto& lam = c.A.eigenvalues();

  IntegratorOptions io;
  io.method = o.integrator.method == "rk4" ? Method::rk4 : Method::dopri5;
  io.fixed_step = o.integrator.step;
  io.rtol = o.integrator.rtol;
  io.atol = o.integrator.atol;
  double spacing = o.integrator.step * o.sample_every;
  long n_out = std::max(1L, std::lround((o.t1 - o.t0) / spacing));
  for (long k = 0; k <= n_out; ++k)
    io.t_eval.push_back(k == n_out ? o.t1 : o.t0 + (o.t1 - o.t0) * static_cast<double>(k) / n_out);

  std::optional<NormalForm> nform;
  std::optional<NearIdentity> nid;
  std::optional<PeriodicFlow> pf;
  if (c.mode == NfMode::poly) {
    auto ps = c.taylor_series();
    std::optional<int> cap = o.degree_cap ? o.degree_cap : o.taylor_degree;
    auto nf = compute_Rk(ps, order, cap);
    nform = normal_form(nf);
    nid = near_identity(nf);
  } else {
    if (order != 1) throw ConfigError("simulate in mode cinf uses the first-order averaged field");
    pf = PeriodicFlow::from(c.A, o.samples, o.base_frequency, o.allow_long_time_average);
  }

  fs::path dir = run.out_dir ? fs::path(*run.out_dir) : fs::path(".");
  json runs = json::array();
  for (std::size_t idx = 0; idx < eps_list.size(); ++idx) {
    double eps = eps_list[idx];
    Field orig = [&](double, std::span<const Complex> x, std::span<Complex> dx) {
      for (std::size_t i = 0; i < x.size(); ++i) dx[i] = lam[i] * x[i];
      double p = 1.0;
      for (const auto& gk : g) {
        p *= eps;
        CVector v = gk(x);
        for (std::size_t i = 0; i < x.size(); ++i) dx[i] += p * v[i];
      }
    };
    Field normal;
    std::function<CVector(std::span<const Complex>)> forward;
    CVector z0;
    if (nform) {
      normal = [&](double, std::span<const Complex> z, std::span<Complex> dz) {
        CVector v = nform->eval(z, eps);
        std::copy(v.begin(), v.end(), dz.begin());
      };
      forward = [&](std::span<const Complex> z) { return nid->forward(z, eps); };
      z0 = nid->inverse(x0, eps);
    } else {
      normal = [&](double, std::span<const Complex> z, std::span<Complex> dz) {
        CVector v = average_PK(*pf, g[0], z);
        for (std::size_t i = 0; i < z.size(); ++i) dz[i] = lam[i] * z[i] + eps * v[i];
      };
      forward = [&](std::span<const Complex> z) {
        CVector v = qpi_evaluate(*pf, g[0], z);
        CVector x(z.begin(), z.end());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += eps * v[i];
        return x;
      };
      z0 = x0;
      for (int it = 0;; ++it) {
        CVector v = qpi_evaluate(*pf, g[0], z0);
        double step = 0.0;
        for (std::size_t i = 0; i < z0.size(); ++i) {
          Complex next = x0[i] - eps * v[i];
          step = std::max(step, std::abs(next - z0[i]));
          z0[i] = next;
        }
        if (step < 1e-13 * std::max(1.0, std::abs(x0[0]))) break;
        if (it >= 100) throw InversionDiverged("averaged near-identity inverse did not converge");
      }
    }

    auto tx = integrate(orig, x0, o.t0, o.t1, io);
    auto tz = integrate(normal, z0, o.t0, o.t1, io);
    auto tt = mapped(tz, forward);
    double worst = 0.0;
    for (std::size_t k = 0; k < tx.x.size(); ++k)
      for (std::size_t i = 0; i < x0.size(); ++i)
        worst = std::max(worst, std::abs(tx.x[k][i] - tt.x[k][i]));

    auto to_real = [&](std::span<const Complex> v) { return apply_basis(o.real_basis, v); };
    auto ox = mapped(tx, to_real), oz = mapped(tz, to_real), ot = mapped(tt, to_real);
    std::string suffix = "_" + std::to_string(idx) + ".csv";
    write_file(dir / ("original" + suffix), ox.csv(has_imaginary_part(ox)));
    write_file(dir / ("normal_form" + suffix), oz.csv(has_imaginary_part(oz)));
    write_file(dir / ("transformed" + suffix), ot.csv(has_imaginary_part(ot)));

    json modulus = json::array();
    for (auto v : tx.x.back()) modulus.push_back(std::abs(v));
    runs.push_back({{"eps", eps},
                    {"max_discrepancy", worst},
                    {"final_time", tx.t.back()},
                    {"final_state", vector_json(ox.x.back())},
                    {"final_modulus", modulus},
                    {"files",
                     {{"original", "original" + suffix},
                      {"normal_form", "normal_form" + suffix},
                      {"transformed", "transformed" + suffix}}}});
  }
  json summary = {{"mode", c.mode == NfMode::poly ? "poly" : "cinf"},
                  {"order", order},
                  {"t_span", {o.t0, o.t1}},
                  {"integrator",
                   {{"method", o.integrator.method},
                    {"step", o.integrator.step},
                    {"rtol", o.integrator.rtol},
                    {"atol", o.integrator.atol}}},
                  {"runs", runs}};
  std::string s = dump(summary);
  write_file(dir / "summary.json", s);
  out_of(run) << s;
  return kExitOk;
}

int run_suites(const std::vector<std::string>& names, const RunOptions& run) {
  VerifyOptions vo;
  vo.seed = run.seed;
  if (run.eps) vo.eps = *run.eps;
  if (run.order) vo.orders = {*run.order};
  json all = json::array();
  std::string text;
  bool ok = true;
  for (const auto& n : names) {
    auto rep = run_suite(n, vo);
    ok = ok && rep.passed();
    all.push_back(rep.to_json());
    text += rep.text();
    err_of(run) << n << ": " << (rep.passed() ? "PASS" : "FAIL") << " (" << rep.seconds << " s)\n";
  }
  json j = {{"passed", ok}, {"seed", run.seed}, {"suites", all}};
  std::string main = run.format == OutputFormat::json ? dump(j) : text;
  emit(run, std::string("verify.") + (run.format == OutputFormat::json ? "json" : "txt"), main);
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int cmd_nf(const JobConfig& config, const RunOptions& run) {
  return config.mode == NfMode::poly ? nf_poly(config, run) : nf_cinf(config, run);
}

int cmd_verify(const std::vector<std::string>& suites, const RunOptions& run) {
  std::vector<std::string> names;
  for (const auto& s : suites) {
    if (s == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
      continue;
    }
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("unknown suite '" + s + "'");
    names.push_back(s);
  }
  if (names.empty()) names = suite_names();
  return run_suites(names, run);
}

int cmd_simulate(const JobConfig& config, const RunOptions& run) { return simulate(config, run); }

int cmd_props(const RunOptions& run) { return run_suites(property_suite_names(), run); }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const ResonantInput*>(&e)) return kExitNumeric;
  if (dynamic_cast<const Error*>(&e)) return kExitConfig;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitConfig;
  return kExitNumeric;
}

}  // namespace rgnf
