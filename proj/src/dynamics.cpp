#include "rgnf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rgnf/errors.hpp"

namespace rgnf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

bool all_finite(std::span<const Complex> v) {
  for (const auto& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Dormand–Prince 5(4) coefficients.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

// One integrator with a uniform step/dense-output interface.
class Stepper {
 public:
  Stepper(const Field& f, const State& x0, double t0, double t1, const IntegratorOptions& o)
      : f_(f), o_(o), n_(x0.size()), t_(t0), t_end_(t1), x_(x0) {
    k_.assign(7, State(n_));
    tmp_.resize(n_);
    xn_.resize(n_);
    err_.resize(n_);
    f_(t_, x_, k_[0]);
    check(k_[0], t_);
    if (o_.method == Method::rk4) {
      long n = std::max(1L, static_cast<long>(std::ceil(std::abs(t1 - t0) / o_.fixed_step - 1e-9)));
      h_ = (t1 - t0) / static_cast<double>(n);
    } else {
      h_ = o_.initial_step > 0 ? o_.initial_step : initial_step();
    }
  }

  double t() const { return t_; }
  const State& x() const { return x_; }
  double t_old() const { return t_old_; }
  const State& x_old() const { return x_old_; }
  double h() const { return h_used_; }
  long steps() const { return steps_; }
  bool done() const { return t_ >= t_end_ - 1e-15 * std::max(1.0, std::abs(t_end_)); }

  // Advances by one accepted step, never past t_end.
  void step() {
    if (++steps_ > o_.max_steps) throw StepUnderflow("step budget exhausted at t = " + fmt(t_));
    x_old_ = x_;
    t_old_ = t_;
    k1_old_ = k_[0];
    if (o_.method == Method::rk4) {
      double h = std::min(h_, t_end_ - t_);
      if (t_end_ - t_ - h < 1e-12 * std::abs(h_)) h = t_end_ - t_;
      rk4_step(t_, x_, h, x_);
      t_ = (t_end_ - (t_ + h) < 1e-12 * std::abs(h_)) ? t_end_ : t_ + h;
      f_(t_, x_, k_[0]);
      check(k_[0], t_);
      h_used_ = h;
      return;
    }
    bool nonfinite = false;
    for (;;) {
      double h = std::min({h_, o_.max_step, t_end_ - t_});
      if (h < o_.min_step && t_end_ - t_ > o_.min_step) {
        if (nonfinite) throw NonFiniteState("non-finite stages at every step size near t = " + fmt(t_));
        throw StepUnderflow("step size " + fmt(h) + " below minimum at t = " + fmt(t_));
      }
      double err = dp_trial(t_, x_, h);
      nonfinite = !std::isfinite(err);
      if (nonfinite) {
        h_ = 0.1 * h;
        continue;
      }
      if (err <= 1.0) {
        x_ = xn_;
        t_ = (t_end_ - (t_ + h) <= 1e-15 * std::max(1.0, std::abs(t_end_))) ? t_end_ : t_ + h;
        // FSAL: k7 is f at the new point; build dense coefficients before swapping.
        build_dense(h);
        k_[0] = k_[6];
        h_used_ = h;
        double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h_ = h * fac;
        return;
      }
      h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
    }
  }

  // State at t_old + θ·h on the last accepted step.
  State dense(double theta) const {
    State y(n_);
    if (o_.method == Method::rk4) {
      // Cubic Hermite through the step end points.
      double h = h_used_, t2 = theta * theta, t3 = t2 * theta;
      double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta, h01 = -2 * t3 + 3 * t2,
             h11 = t3 - t2;
      for (std::size_t i = 0; i < n_; ++i)
        y[i] = h00 * x_old_[i] + h10 * h * k1_old_[i] + h01 * x_[i] + h11 * h * k_[0][i];
      return y;
    }
    double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < n_; ++i)
      y[i] = r_[0][i] +
             theta * (r_[1][i] + th1 * (r_[2][i] + theta * (r_[3][i] + th1 * r_[4][i])));
    return y;
  }

  // A single step of size h from (t0, x0) with the current method; used to
  // polish section crossings.
  State single_step(double t0, const State& x0, double h) {
    State out(n_);
    if (o_.method == Method::rk4) {
      rk4_step(t0, x0, h, out);
      return out;
    }
    State k1(n_);
    f_(t0, x0, k1);
    std::swap(k1, k_[0]);
    dp_trial(t0, x0, h);
    std::swap(k1, k_[0]);
    return xn_;
  }

 private:
  void check(std::span<const Complex> v, double t) const {
    if (!all_finite(v)) throw NonFiniteState("non-finite state at t = " + fmt(t));
  }

  double initial_step() const {
    double d0 = max_abs(x_), d1 = max_abs(k_[0]);
    double span = std::abs(t_end_ - t_);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::max(h, 1e-6);
    return std::min({h, span, o_.max_step});
  }

  void rk4_step(double t, const State& x, double h, State& out) {
    State& k1 = k_[1];
    State& k2 = k_[2];
    State& k3 = k_[3];
    State& k4 = k_[4];
    f_(t, x, k1);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + 0.5 * h * k1[i];
    f_(t + 0.5 * h, tmp_, k2);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + 0.5 * h * k2[i];
    f_(t + 0.5 * h, tmp_, k3);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + h * k3[i];
    f_(t + h, tmp_, k4);
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    check(out, t + h);
  }

  // Fills k_[1..6] and xn_ from k_[0]; returns the scaled error norm.
  double dp_trial(double t, const State& x, double h) {
    using namespace dp;
    auto& k = k_;
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + h * a21 * k[0][i];
    f_(t + c2 * h, tmp_, k[1]);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    f_(t + c3 * h, tmp_, k[2]);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = x[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    f_(t + c4 * h, tmp_, k[3]);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = x[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    f_(t + c5 * h, tmp_, k[4]);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = x[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                            a65 * k[4][i]);
    f_(t + h, tmp_, k[5]);
    for (std::size_t i = 0; i < n_; ++i)
      xn_[i] = x[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                           a76 * k[5][i]);
    f_(t + h, xn_, k[6]);
    if (!all_finite(xn_) || !all_finite(k[6])) return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      Complex e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                       e7 * k[6][i]);
      double sc = o_.atol + o_.rtol * std::max(std::abs(x[i]), std::abs(xn_[i]));
      double q = std::abs(e) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n_));
  }

  void build_dense(double h) {
    using namespace dp;
    r_.assign(5, State(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      Complex ydiff = x_[i] - x_old_[i];
      Complex bspl = h * k_[0][i] - ydiff;
      r_[0][i] = x_old_[i];
      r_[1][i] = ydiff;
      r_[2][i] = bspl;
      r_[3][i] = ydiff - h * k_[6][i] - bspl;
      r_[4][i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                      d6 * k_[5][i] + d7 * k_[6][i]);
    }
  }

  const Field& f_;
  IntegratorOptions o_;
  std::size_t n_;
  double t_, t_end_;
  double t_old_ = 0.0;
  State x_, x_old_, xn_, tmp_, err_, k1_old_;
  std::vector<State> k_;
  std::vector<State> r_;
  double h_ = 0.0, h_used_ = 0.0;
  long steps_ = 0;
};

const char* method_name(Method m) { return m == Method::rk4 ? "rk4" : "dopri5"; }

}  // namespace

Field autonomous(std::function<CVector(std::span<const Complex>)> f) {
  return [f = std::move(f)](double, std::span<const Complex> x, std::span<Complex> dx) {
    CVector v = f(x);
    std::copy(v.begin(), v.end(), dx.begin());
  };
}

std::string Trajectory::csv(bool complex_states) const {
  std::ostringstream os;
  os.precision(17);
  std::size_t n = x.empty() ? 0 : x.front().size();
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) {
    if (complex_states)
      os << ",re" << i << ",im" << i;
    else
      os << ",x" << i;
  }
  os << "\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    os << t[k];
    for (const auto& c : x[k]) {
      os << "," << c.real();
      if (complex_states) os << "," << c.imag();
    }
    os << "\n";
  }
  return os.str();
}

Trajectory integrate(const Field& f, const State& x0, double t0, double t1,
                     const IntegratorOptions& opts) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0)
    throw DomainError("integration span must be finite and increasing");
  if (!all_finite(x0)) throw NonFiniteState("non-finite initial state");

  Trajectory tr;
  tr.method = method_name(opts.method);
  tr.rtol = opts.rtol;
  tr.atol = opts.atol;

  if (opts.method == Method::rk4 && !opts.t_eval.empty()) {
    // Segment-wise so every requested time is hit exactly.
    State x = x0;
    double t = t0;
    for (double te : opts.t_eval) {
      if (te < t || te > t1) throw DomainError("t_eval outside the span or not increasing");
      if (te > t) {
        Stepper s(f, x, t, te, opts);
        while (!s.done()) s.step();
        x = s.x();
        tr.steps += s.steps();
        tr.step = s.h();
      }
      t = te;
      tr.t.push_back(te);
      tr.x.push_back(x);
    }
    return tr;
  }

  Stepper s(f, x0, t0, t1, opts);
  std::size_t next = 0;
  auto& te = opts.t_eval;
  if (te.empty()) {
    tr.t.push_back(t0);
    tr.x.push_back(x0);
  }
  while (next < te.size() && te[next] <= t0) {
    if (te[next] == t0) {
      tr.t.push_back(t0);
      tr.x.push_back(x0);
    }
    ++next;
  }
  if (t1 > t0) {
    while (!s.done()) {
      s.step();
      if (te.empty()) {
        tr.t.push_back(s.t());
        tr.x.push_back(s.x());
        continue;
      }
      while (next < te.size() && te[next] <= s.t()) {
        double theta = (te[next] - s.t_old()) / s.h();
        tr.t.push_back(te[next]);
        tr.x.push_back(te[next] == s.t() ? s.x() : s.dense(theta));
        ++next;
      }
    }
  }
  tr.steps = s.steps();
  tr.step = s.h();
  return tr;
}

Section ray_section(int i, int j) {
  Section s;
  s.name = "x" + std::to_string(j + 1) + " = 0, x" + std::to_string(i + 1) + " > 0";
  s.value = [j](std::span<const Complex> x) { return x[j].real(); };
  s.direction = -1;
  s.accept = [i](std::span<const Complex> x) { return x[i].real() > 0.0; };
  return s;
}

State PolarChart::point(double r) const {
  State x(dim, Complex(0.0));
  x[i] = scale * r;
  return x;
}

double PolarChart::radius(std::span<const Complex> x) const {
  return std::hypot(x[i].real(), x[j].real()) / scale;
}

namespace {

bool crosses(int dir, double s0, double s1) {
  if (dir > 0) return s0 < 0.0 && s1 >= 0.0;
  if (dir < 0) return s0 > 0.0 && s1 <= 0.0;
  return (s0 < 0.0 && s1 >= 0.0) || (s0 > 0.0 && s1 <= 0.0);
}

// Illinois iteration for g(u) = 0 on [a, b] with g(a), g(b) of opposite sign.
template <class G>
double illinois(G&& g, double a, double b, double ga, double gb, double tol, int max_iter = 100) {
  int side = 0;
  for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
    double c = (a * gb - b * ga) / (gb - ga);
    double gc = g(c);
    if (gc == 0.0) return c;
    if ((gc > 0) == (gb > 0)) {
      b = c;
      gb = gc;
      if (side == -1) ga *= 0.5;
      side = -1;
    } else {
      a = c;
      ga = gc;
      if (side == 1) gb *= 0.5;
      side = 1;
    }
  }
  return std::abs(ga) < std::abs(gb) ? a : b;
}

}  // namespace

std::vector<Crossing> poincare_map(const Field& f, const Section& section, const State& x0,
                                   int n_returns, const SectionOptions& opts) {
  std::vector<Crossing> out;
  if (n_returns <= 0) return out;
  double budget_end = opts.time_budget;
  // Integrate in chunks of the per-return budget; the budget restarts after
  // each crossing.
  double t = 0.0;
  State x = x0;
  while (static_cast<int>(out.size()) < n_returns) {
    Stepper s(f, x, t, budget_end, opts.integrator);
    double s_prev = section.value(x);
    bool found = false;
    while (!s.done()) {
      s.step();
      double s_now = section.value(s.x());
      if (crosses(section.direction, s_prev, s_now)) {
        double h = s.h();
        double t0 = s.t_old();
        auto on_dense = [&](double th) { return section.value(s.dense(th)); };
        double g0 = section.value(s.x_old());
        double th = illinois(on_dense, 0.0, 1.0, g0, s_now, 1e-15);
        // Polish with exact single steps from the step start.
        auto exact = [&](double tau) { return section.value(s.single_step(t0, s.x_old(), tau)); };
        double tau = th * h;
        if (tau > 0.0) {
          double ga = g0, gb = s_now;
          double lo = 0.0, hi = h;
          double gt = exact(tau);
          if (gt != 0.0) {
            if ((gt > 0) == (ga > 0)) {
              lo = tau;
              ga = gt;
            } else {
              hi = tau;
              gb = gt;
            }
            tau = illinois(exact, lo, hi, ga, gb, 1e-15 * std::max(1.0, std::abs(t0)));
          }
        }
        State xc = tau > 0.0 ? s.single_step(t0, s.x_old(), tau) : s.x_old();
        if (!section.accept || section.accept(xc)) {
          double res = std::abs(section.value(xc));
          out.push_back({t0 + tau, xc, res});
          found = true;
          x = s.x();
          t = s.t();
          break;
        }
      }
      s_prev = s_now;
    }
    if (!found)
      throw NoReturn("no return to section '" + section.name + "' within time budget " +
                     fmt(opts.time_budget));
    budget_end = out.back().t + opts.time_budget;
  }
  return out;
}

double return_map(const Field& f, const Section& section, const PolarChart& chart, double r,
                  const SectionOptions& opts, double* return_time) {
  auto c = poincare_map(f, section, chart.point(r), 1, opts);
  if (return_time) *return_time = c.front().t;
  return chart.radius(c.front().x);
}

nlohmann::json OrbitReport::to_json() const {
  return {{"section", section},       {"r_star", r_star},       {"mu", mu},
          {"classification", classification}, {"residual", residual}, {"period", period},
          {"closure_error", closure_error}};
}

OrbitReport find_periodic_orbit(const Field& f, const Section& section, const PolarChart& chart,
                                double r_lo, double r_hi, const SectionOptions& opts) {
  auto F = [&](double r) { return return_map(f, section, chart, r, opts) - r; };
  double a = r_lo, b = r_hi;
  double fa = F(a), fb = F(b);
  if (fa == 0.0) b = a, fb = fa;
  if (fb == 0.0) a = b, fa = fb;
  if (a != b && (fa > 0) == (fb > 0))
    throw NoSignChange("return map minus identity has no sign change on [" + fmt(r_lo) + ", " +
                       fmt(r_hi) + "]");
  // Bisection to a narrow bracket, then safeguarded secant.
  while (b - a > 1e-3) {
    double m = 0.5 * (a + b), fm = F(m);
    if (fm == 0.0) {
      a = b = m;
      fa = fb = 0.0;
      break;
    }
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double r = std::abs(fa) < std::abs(fb) ? a : b;
  if (a != b) {
    double x0 = a, x1 = b, f0 = fa, f1 = fb;
    for (int it = 0; it < 60; ++it) {
      double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      if (!(x2 > a && x2 < b)) x2 = 0.5 * (a + b);
      double f2 = F(x2);
      if ((f2 > 0) == (fa > 0)) {
        a = x2;
        fa = f2;
      } else {
        b = x2;
        fb = f2;
      }
      x0 = x1, f0 = f1, x1 = x2, f1 = f2;
      r = x2;
      if (std::abs(f2) < 1e-13 || b - a < 1e-14 * std::max(1.0, r)) break;
    }
  }

  OrbitReport rep;
  rep.section = section.name;
  rep.r_star = r;
  double period = 0.0;
  rep.residual = std::abs(return_map(f, section, chart, r, opts, &period) - r);
  rep.period = period;
  double dr = 1e-4 * (1.0 + r);
  rep.mu = (return_map(f, section, chart, r + dr, opts) - return_map(f, section, chart, r - dr, opts)) /
           (2.0 * dr);
  rep.classification = std::abs(rep.mu) < 1.0 ? "attracting" : std::abs(rep.mu) > 1.0 ? "repelling" : "neutral";

  IntegratorOptions io = opts.integrator;
  io.t_eval = {period};
  State x0 = chart.point(r);
  auto tr = integrate(f, x0, 0.0, period, io);
  double err = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) err = std::max(err, std::abs(tr.x.back()[i] - x0[i]));
  rep.closure_error = err;
  return rep;
}

nlohmann::json ScalingReport::to_json() const {
  nlohmann::json j = {{"order", order},
                      {"eps", eps},
                      {"discrepancy", discrepancy},
                      {"roundoff_only", roundoff_only},
                      {"pass", pass}};
  j["slope"] = roundoff_only ? nlohmann::json(nullptr) : nlohmann::json(slope);
  j["accepted_slope"] = {order + 0.6, order + 1.4};
  return j;
}

double fitted_slope(std::span<const double> eps, std::span<const double> err) {
  if (eps.size() != err.size() || eps.size() < 2)
    throw DimensionMismatch("slope fit needs at least two matched samples");
  std::size_t n = eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(eps[i]), ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

ScalingReport residual_scaling(const PerturbationSeries& ps, const NormalFormResult& nf, int m,
                               std::span<const double> eps_list, const State& z0, double step) {
  if (m < 1 || m > nf.order)
    throw OrderOutOfRange("scaling order " + std::to_string(m) + " outside 1.." +
                          std::to_string(nf.order));
  if (static_cast<int>(z0.size()) != ps.dim())
    throw DimensionMismatch("initial state dimension differs from the system");

  std::vector<CompiledField> g;
  for (const auto& gk : ps.terms()) g.emplace_back(gk);
  std::vector<PolyVF> pk(nf.PK_Rk.begin(), nf.PK_Rk.begin() + m);
  std::vector<PolyVF> h(nf.QPI_Rk.begin(), nf.QPI_Rk.begin() + m);
  NormalForm nform(nf.A, pk);
  NearIdentity nid(h);
  const DiagLinearPart& A = ps.A();
  std::vector<Complex> lam(A.dim());
  for (int i = 0; i < A.dim(); ++i) lam[i] = A.eigenvalues()[i];

  ScalingReport rep;
  rep.order = m;
  rep.eps.assign(eps_list.begin(), eps_list.end());
  long n_steps = std::max(1L, std::lround(1.0 / step));
  IntegratorOptions io;
  io.method = Method::rk4;
  io.fixed_step = 1.0 / static_cast<double>(n_steps);
  for (long k = 1; k <= n_steps; ++k) io.t_eval.push_back(static_cast<double>(k) / n_steps);

  for (double eps : eps_list) {
    Field orig = [&](double, std::span<const Complex> x, std::span<Complex> dx) {
      for (std::size_t i = 0; i < x.size(); ++i) dx[i] = lam[i] * x[i];
      double p = 1.0;
      CVector tmp(x.size());
      for (const auto& gk : g) {
        p *= eps;
        gk.eval(x, tmp);
        for (std::size_t i = 0; i < x.size(); ++i) dx[i] += p * tmp[i];
      }
    };
    Field normal = [&](double, std::span<const Complex> z, std::span<Complex> dz) {
      CVector v = nform.eval(z, eps);
      std::copy(v.begin(), v.end(), dz.begin());
    };
    State x0 = nid.forward(z0, eps);
    auto tx = integrate(orig, x0, 0.0, 1.0, io);
    auto tz = integrate(normal, z0, 0.0, 1.0, io);
    double E = 0.0;
    for (std::size_t k = 0; k < tx.t.size(); ++k) {
      CVector mapped = nid.forward(tz.x[k], eps);
      for (std::size_t i = 0; i < mapped.size(); ++i)
        E = std::max(E, std::abs(tx.x[k][i] - mapped[i]));
    }
    rep.discrepancy.push_back(E);
  }
  double emax = *std::max_element(rep.discrepancy.begin(), rep.discrepancy.end());
  rep.roundoff_only = emax < 1e-13;
  if (rep.roundoff_only) {
    rep.pass = true;
  } else {
    std::vector<double> e = rep.discrepancy;
    for (auto& v : e) v = std::max(v, 1e-300);
    rep.slope = fitted_slope(rep.eps, e);
    rep.pass = rep.slope >= m + 0.6 && rep.slope <= m + 1.4;
  }
  return rep;
}

}  // namespace rgnf
