#include <cstdio>
#include <exception>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "emato/error.hpp"

using namespace emato::cli;

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware trajectory optimization toolkit"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the fuel-rate model on a synthetic engine map");
  fit_cmd->add_option("spec", fit.spec, "Fit spec JSON (map, transmission, grid, mass)");
  fit_cmd->add_option("--vehicle", fit.vehicle, "sedan or truck")->check(CLI::IsMember({"sedan", "truck"}));
  fit_cmd->add_flag("--use-appendix", fit.use_appendix, "Emit the tabulated coefficients without fitting");
  fit_cmd->add_option("--out", fit.out, "Output directory");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one closed-loop scenario");
  run_cmd->add_option("scenario", run.scenario, "png, acc or frenet")
      ->required()
      ->check(CLI::IsMember({"png", "acc", "frenet"}));
  run_cmd->add_option("--config", run.config, "Scenario config JSON");
  run_cmd->add_option("--vehicle", run.vehicle, "sedan or truck");
  run_cmd->add_option("--slope", run.slope, "flat, rolling or steep");
  run_cmd->add_option("--algo", run.algo, "Algorithm id");
  run_cmd->add_option("--cycle", run.cycle, "Cycle name or CSV path (acc)");
  run_cmd->add_option("--distance", run.distance, "Distance budget in m (png, frenet)");
  run_cmd->add_option("--seed", run.seed, "Traffic layout seed (frenet)");
  run_cmd->add_option("--out", run.out, "Output directory");

  MatrixOptions mat;
  auto* mat_cmd = app.add_subcommand("matrix", "Run a vehicles x slopes x algorithms matrix");
  mat_cmd->add_option("scenario", mat.scenario, "acc or frenet");
  mat_cmd->add_option("--spec", mat.spec, "Matrix spec JSON");
  mat_cmd->add_option("--config", mat.config, "Base scenario config JSON");
  mat_cmd->add_option("--vehicle", mat.vehicles, "Vehicles")->delimiter(',');
  mat_cmd->add_option("--slope", mat.slopes, "Slopes")->delimiter(',');
  mat_cmd->add_option("--algo", mat.algos, "Algorithms")->delimiter(',');
  mat_cmd->add_option("--cycle", mat.cycle, "Cycle name or CSV path");
  mat_cmd->add_option("--jobs", mat.jobs, "Worker threads, 0 for all cores");
  mat_cmd->add_option("--out", mat.out, "Output directory");

  std::string check_kind;
  auto* check_cmd = app.add_subcommand("check", "Run a validation suite");
  check_cmd->add_option("kind", check_kind, "gradients, units or quintic")
      ->required()
      ->check(CLI::IsMember({"gradients", "units", "quintic"}));

  std::string cycle_name, cycle_out;
  auto* cyc_cmd = app.add_subcommand("export-cycle", "Write a built-in driving cycle as CSV");
  cyc_cmd->add_option("name", cycle_name, "highway, highway-short, urban or composite")->required();
  cyc_cmd->add_option("--out", cycle_out, "Output CSV, stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*run_cmd) return cmd_run(run);
    if (*mat_cmd) {
      if (mat.scenario.empty() && mat.spec.empty()) throw emato::InvalidSpec("matrix needs a scenario or --spec");
      return cmd_matrix(mat);
    }
    if (*check_cmd) return cmd_check(check_kind);
    if (*cyc_cmd) return cmd_export_cycle(cycle_name, cycle_out);
  } catch (const emato::InvalidSpec& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeFailure;
  }
  return kOk;
}
