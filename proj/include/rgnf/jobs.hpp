#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rgnf/config.hpp"
#include "rgnf/format.hpp"

namespace rgnf {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitVerification = 4,
};

struct RunOptions {
  std::optional<std::string> out_dir;
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> eps;
  std::optional<int> order;
  std::ostream* out = nullptr;  // defaults to std::cout
  std::ostream* err = nullptr;  // defaults to std::cerr
};

int cmd_nf(const JobConfig& config, const RunOptions& run);
// suites: names from suite_names(), or {"all"}.
int cmd_verify(const std::vector<std::string>& suites, const RunOptions& run);
int cmd_simulate(const JobConfig& config, const RunOptions& run);
int cmd_props(const RunOptions& run);

// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

}  // namespace rgnf
