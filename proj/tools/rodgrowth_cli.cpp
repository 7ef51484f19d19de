// Command-line front end: run a scenario, study convergence, or validate the
// configured energy family. All heavy lifting lives in the headers; this file
// only maps arguments onto the command functions and their exit codes.

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rodgrowth/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quasi-stationary growth simulator for a clamped 1D rod"};
  app.require_subcommand(1);

  std::string scenario;
  std::string outdir = ".";
  std::string mode = "space";
  std::string report_json;

  auto* run_cmd = app.add_subcommand("run", "integrate a scenario and write CSV/JSON outputs");
  run_cmd->add_option("scenario", scenario, "scenario JSON file")->required();
  run_cmd->add_option("--out", outdir, "output directory (default: current)");

  auto* conv_cmd =
      app.add_subcommand("convergence", "self-convergence study, writes orders.csv");
  conv_cmd->add_option("scenario", scenario, "scenario JSON file")->required();
  conv_cmd->add_option("--mode", mode, "space or time")->required();
  conv_cmd->add_option("--out", outdir, "output directory (default: current)");

  auto* val_cmd =
      app.add_subcommand("validate-energy", "check the energy family assumptions");
  val_cmd->add_option("scenario", scenario, "scenario JSON file")->required();
  val_cmd->add_option("--json", report_json, "also write the report as JSON to this file");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) return rodgrowth::cmd_run(scenario, outdir);
  if (conv_cmd->parsed()) return rodgrowth::cmd_convergence(scenario, mode, outdir);
  std::optional<std::filesystem::path> json_path;
  if (!report_json.empty()) json_path = report_json;
  return rodgrowth::cmd_validate_energy(scenario, json_path);
}
