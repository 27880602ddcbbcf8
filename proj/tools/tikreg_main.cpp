#include "tikreg/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Tikhonov-regularized KM iterations: runs, certified rates, moduli validation"};
  app.require_subcommand(1);

  std::string config;
  tikreg::RunOptions run_opts;
  std::string cap_text;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV + JSON reports");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  run->add_option("--out", run_opts.out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Seed for the starting point");
  run->add_option("--cap", cap_text, "Saturation cap for rate values");
  run->add_option("--thin", run_opts.thin, "Write every STRIDE-th iterate");
  run->add_flag("--norms-only", run_opts.norms_only, "Write |x_n| instead of coordinates");

  std::uint64_t k = 0;
  std::string f_spec = "identity";
  auto* rates = app.add_subcommand("rates", "Print certified rate values");
  rates->add_option("config", config, "Config with schedule and moduli")->required();
  rates->add_option("--k", k, "Error index k");
  rates->add_option("--f", f_spec, "Counterexample function: identity | affine:a,b | table:v0,v1,...");
  rates->add_option("--cap", cap_text, "Saturation cap");

  std::uint64_t horizon = 100000;
  std::uint64_t k_max = 8;
  auto* validate = app.add_subcommand("validate", "Check the moduli against the schedule");
  validate->add_option("config", config, "Config with schedule and moduli")->required();
  validate->add_option("--horizon", horizon, "Largest n checked");
  validate->add_option("--k-max", k_max, "Largest k checked");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tikreg::kExitConfigError;
  }

  tikreg::BigInt cap = tikreg::BoundedNat::default_cap();
  if (!cap_text.empty()) {
    try {
      cap = tikreg::parse_big_natural(cap_text);
    } catch (const std::exception& e) {
      std::cerr << "--cap: " << e.what() << '\n';
      return tikreg::kExitConfigError;
    }
  }

  if (*run) {
    run_opts.cap = cap;
    if (*seed_opt) run_opts.seed = seed;
    return tikreg::cmd_run(config, run_opts, std::cout, std::cerr);
  }
  if (*rates) return tikreg::cmd_rates(config, k, f_spec, cap, std::cout, std::cerr);
  return tikreg::cmd_validate(config, horizon, k_max, std::cout, std::cerr);
}
