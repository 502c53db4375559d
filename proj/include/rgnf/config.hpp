#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgnf/expr.hpp"
#include "rgnf/rg_core.hpp"
#include "rgnf/spectra.hpp"

namespace rgnf {

enum class NfMode { poly, cinf };

struct IntegratorConfig {
  std::string method = "rk4";  // rk4 | dopri5
  double step = 1e-3;
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct JobOptions {
  int taylor_degree = 7;
  std::optional<int> degree_cap;
  int samples = 256;
  double base_frequency = 1.0;
  bool allow_long_time_average = false;
  double delta = 0.05;
  int mollifier_extent = 64;
  std::vector<double> eps = {0.1};
  // Grid y = (r, r) for tabulating averaged fields in dimension 2.
  double r_min = 0.1;
  double r_max = 5.0;
  int r_count = 50;
  std::vector<CVector> points;  // explicit evaluation points (any dim)
  // Simulation.
  std::optional<CVector> x0;
  double t0 = 0.0;
  double t1 = 10.0;
  IntegratorConfig integrator;
  int sample_every = 1;
  // x_real = T z; when present x0 is read and trajectories are written in
  // these coordinates.
  std::optional<std::vector<Complex>> real_basis;
};

/// One job document:
/// {
///   "dim": 2,
///   "lambda": [["0", "1"], ["0", "-1"]],      or "A": n x n matrix of [re, im]
///   "mode": "poly" | "cinf",
///   "order": 1,
///   "parameters": {"eps": "1/10"},
///   "perturbation": [["sin(x1 + x2)", "sin(x1 + x2)"]],
///   "options": {...}
/// }
struct JobConfig {
  int dim = 0;
  DiagLinearPart A = DiagLinearPart::exact({GaussianRational(0)});
  NfMode mode = NfMode::poly;
  int order = 1;
  expr::ExactParams parameters;
  std::vector<expr::VectorFieldDef> perturbation;  // g_1, g_2, ...
  std::vector<std::vector<std::string>> sources;
  JobOptions options;

  expr::ParamValues numeric_parameters() const;
  PerturbationSeries taylor_series() const;
};

// Throws ConfigError (or SyntaxError / DimensionError / NotDiagonal from the
// parts) on invalid input.
JobConfig parse_config(const nlohmann::json& j);
JobConfig load_config(const std::string& path);

// "0.1,0.05" -> {0.1, 0.05}
std::vector<double> parse_eps_list(const std::string& text);

}  // namespace rgnf
