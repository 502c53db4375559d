// rgnf: normal forms by the renormalization-group method.
#include <iostream>

#include <CLI11.hpp>

#include "rgnf/errors.hpp"
#include "rgnf/jobs.hpp"
#include "rgnf/verify.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string eps;
  int order = 0;
};

void add_common(CLI::App* cmd, Flags& f, bool needs_config) {
  auto* c = cmd->add_option("--config", f.config, "job config (JSON)");
  if (needs_config) c->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "json | text | latex")
      ->check(CLI::IsMember({"json", "text", "latex"}));
  cmd->add_option("--seed", f.seed, "seed for randomized suites");
  cmd->add_option("--eps", f.eps, "comma-separated eps values");
  cmd->add_option("--order", f.order, "normal-form order")->check(CLI::Range(1, 6));
}

rgnf::RunOptions run_options(const Flags& f) {
  rgnf::RunOptions r;
  if (!f.out.empty()) r.out_dir = f.out;
  r.format = rgnf::parse_output_format(f.format);
  r.seed = f.seed;
  if (!f.eps.empty()) r.eps = rgnf::parse_eps_list(f.eps);
  if (f.order > 0) r.order = f.order;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal forms of vector fields by the renormalization-group method"};
  app.require_subcommand(1);
  Flags flags;

  auto* nf = app.add_subcommand("nf", "compute a normal form and near-identity transform");
  add_common(nf, flags, true);

  std::vector<std::string> suites;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, flags, false);
  verify->add_option("suite", suites, "props-32-34 | hierarchy | scaling | example41 | example42 | all");

  auto* simulate = app.add_subcommand("simulate", "integrate original and normal-form systems");
  add_common(simulate, flags, true);

  auto* props = app.add_subcommand("props", "randomized algebraic property suites");
  add_common(props, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : rgnf::kExitConfig;
  }

  try {
    auto run = run_options(flags);
    if (nf->parsed()) return rgnf::cmd_nf(rgnf::load_config(flags.config), run);
    if (simulate->parsed()) return rgnf::cmd_simulate(rgnf::load_config(flags.config), run);
    if (verify->parsed()) return rgnf::cmd_verify(suites.empty() ? std::vector<std::string>{"all"} : suites, run);
    if (props->parsed()) return rgnf::cmd_props(run);
  } catch (const std::exception& e) {
    int code = rgnf::exit_code_for(e);
    std::cerr << "rgnf: " << (code == rgnf::kExitConfig ? "config error: " : "numeric failure: ")
              << e.what() << "\n";
    return code;
  }
  return rgnf::kExitConfig;
}
