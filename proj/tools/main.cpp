#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elsim/driver.hpp"
#include "elsim/output.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral Ericksen-Leslie nematic flow simulator"};
  app.set_version_flag("--version", elsim::build_version());
  app.require_subcommand(1);

  elsim::CliOptions opts;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config,-c", opts.config_path, "Run configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_flag("--structured", opts.structured, "Emit machine-readable JSON");
  };

  auto* validate = app.add_subcommand("validate", "Check the coefficient constraints and regime");
  add_common(validate, true);

  auto* run = app.add_subcommand("run", "Integrate a configuration and write diagnostics");
  add_common(run, true);
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--output-dir,-o", opts.output_dir, "Output directory");
    sub->add_option("--cadence", opts.cadence, "Diagnostic row every N steps")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", opts.threads, "FFT threads")->check(CLI::PositiveNumber);
  };
  add_run_flags(run);

  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Run a family of configurations along one axis");
  add_common(sweep, true);
  add_run_flags(sweep);
  sweep->add_option("--axis", axis, "dt, M or n")->required();
  sweep->add_option("--values", values, "Axis values")->expected(0, -1);

  std::vector<std::string> snapshots;
  auto* inspect = app.add_subcommand("inspect", "Print snapshot metadata and norms");
  inspect->add_option("files", snapshots, "Snapshot files")->required();
  inspect->add_flag("--structured", opts.structured, "Emit machine-readable JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : elsim::kExitConfigError;
  }

  if (*validate) return elsim::cli_validate(opts, std::cout, std::cerr);
  if (*run) return elsim::cli_run(opts, std::cout, std::cerr);
  if (*sweep) return elsim::cli_sweep(opts, axis, values, std::cout, std::cerr);
  if (*inspect) return elsim::cli_inspect(snapshots, opts.structured, std::cout, std::cerr);
  return elsim::kExitConfigError;
}
