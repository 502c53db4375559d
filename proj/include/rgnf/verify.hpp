#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rgnf {

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  nlohmann::json detail = nlohmann::json::object();
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  // Reported but never gated.
  nlohmann::json info = nlohmann::json::object();
  double seconds = 0.0;

  bool passed() const;
  const Check* find(const std::string& name) const;
  nlohmann::json to_json() const;
  std::string text() const;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int trials = 200;
  std::vector<double> eps = {1e-2, 5e-3, 2.5e-3};
  std::vector<int> orders = {1, 2, 3};
  // Oscillator fixture parameters.
  double eps41 = 0.1;
  double eps42 = 0.05;
  double delta = 0.05;
};

// props-32-34, hierarchy, scaling, example41, example42
const std::vector<std::string>& suite_names();

// Randomized identities run by the props command: algebra, props-32-34
const std::vector<std::string>& property_suite_names();

// Throws ConfigError for an unknown suite.
SuiteReport run_suite(const std::string& name, const VerifyOptions& opts = {});

}  // namespace rgnf
