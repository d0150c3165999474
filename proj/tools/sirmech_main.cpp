#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sirmech/io/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixed-step SIR integrators with Hamiltonian and Lagrangian formulations"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log every accepted step to standard error");

  std::string scenario;
  std::string out;
  std::string grid;
  std::string csv;
  bool drift = false;

  auto* run = app.add_subcommand("run", "Integrate every run of a scenario and write CSV files");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--out", out, "Output directory")->required();

  auto* check = app.add_subcommand("check", "Run conservation and equivalence checks against scenario tolerances");
  check->add_option("scenario", scenario, "Scenario JSON file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run the first scenario run over a parameter grid");
  sweep->add_option("scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--grid", grid, "Grid, e.g. \"r0=1.5,2,3;dt=0.01\" (keys: beta, gamma, r0, dt, method)")
      ->required();
  sweep->add_option("--out", out, "Output directory")->required();

  auto* plot = app.add_subcommand("plot", "Render a trajectory CSV as an SVG chart");
  plot->add_option("csv", csv, "Trajectory CSV")->required();
  plot->add_option("--out", out, "Output SVG file")->required();
  plot->add_flag("--drift", drift, "Add an H drift panel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sirmech::io::kExitConfig;
  }

  const sirmech::io::CommandStreams io{std::cout, std::cerr, verbose};
  if (run->parsed()) return sirmech::io::cmd_run(scenario, out, io);
  if (check->parsed()) return sirmech::io::cmd_check(scenario, io);
  if (sweep->parsed()) return sirmech::io::cmd_sweep(scenario, grid, out, io);
  return sirmech::io::cmd_plot(csv, out, drift, io);
}
