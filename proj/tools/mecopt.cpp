#include "mecopt/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace mecopt::cli;

  CLI::App app{"Energy-minimal task placement and CPU frequency selection across MEC and cloud nodes"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheduler;
  std::optional<std::string> out;
  bool emit_plot = false;

  auto* run = app.add_subcommand("run", "Simulate one scenario and print its metrics as CSV");
  run->add_option("--config", config, "Scenario config (JSON)")->required();
  run->add_option("--seed", seed, "Override the workload seed");
  run->add_option("--scheduler", scheduler, "optimal | cloud_only | nearest_mec | brute_force");
  run->add_option("--out", out, "Write CSV here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write one CSV row per point");
  sweep->add_option("--config", config, "Sweep config (JSON)")->required();
  sweep->add_option("--out", out, "Write CSV here instead of stdout");
  sweep->add_flag("--emit-plot", emit_plot, "Also write <out>.plot.py drawing the sweep");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the optimal scheduler with exhaustive search");
  oracle->add_option("--config", config, "Small scenario config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  std::optional<std::filesystem::path> out_path;
  if (out) out_path = *out;

  if (run->parsed()) return cmd_run(config, RunOverrides{seed, scheduler}, out_path, std::cout, std::cerr);
  if (sweep->parsed()) return cmd_sweep(config, out_path, emit_plot, std::cout, std::cerr);
  return cmd_oracle_check(config, std::cout, std::cerr);
}
