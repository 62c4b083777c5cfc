#include <iostream>

#include <CLI11.hpp>

#include "fsi/run.hpp"
#include "fsi/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fluid-structure solver on a fixed reference configuration"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Solve and write snapshots, time series and ledgers");
  run->add_option("config", config, "Run configuration (INI)")->required();
  auto* check = app.add_subcommand("check", "Print the initial-data compatibility report");
  check->add_option("config", config, "Run configuration (INI)")->required();
  auto* infsup = app.add_subcommand("infsup", "Print the discrete inf-sup report");
  infsup->add_option("config", config, "Run configuration (INI)")->required();
  auto* selftest = app.add_subcommand("tensor-selftest", "Finite-difference check of the coefficient tensors");
  int samples = 100;
  selftest->add_option("--samples", samples, "Random displacement gradients")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    const auto out = fsi::run_file(config, std::cerr);
    if (out.exit_code == fsi::kExitOk) std::cout << "wrote " << out.output_dir.string() << "\n";
    return out.exit_code;
  }
  if (*check) return fsi::check_file(config, std::cout);
  if (*infsup) return fsi::infsup_file(config, std::cout);
  fsi::print_selftest(fsi::tensor_selftest(samples), std::cout);
  return 0;
}
