#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using CV = std::vector<C>;

// Classical RK4 on a complex system with n equal steps.
inline CV rk4(const std::function<CV(const CV&)>& f, CV x, double t, int n) {
  double h = t / n;
  for (int k = 0; k < n; ++k) {
    CV k1 = f(x), y = x;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + 0.5 * h * k1[i];
    CV k2 = f(y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + 0.5 * h * k2[i];
    CV k3 = f(y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + h * k3[i];
    CV k4 = f(y);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x;
}

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

inline C csimpson(const std::function<C(double)>& f, double a, double b, int n) {
  double h = (b - a) / n;
  C s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * (h / 3.0);
}

inline std::vector<long long> binomials(int n) {
  std::vector<long long> row(n + 1, 1);
  for (int k = 1; k < n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

}  // namespace oracle
