// tailbound CLI: compute bound tables, sweep thresholds, run the
// verification suite, probe strict absolute monotonicity, and inspect
// operator series. See README.md for the grammar and exit codes.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tailbound/cli.hpp"

namespace {

void add_format_option(CLI::App* cmd, tailbound::RunConfig& cfg) {
  cmd->add_option_function<std::string>(
         "--format",
         [&cfg](const std::string& v) {
           if (v == "table") {
             cfg.format = tailbound::OutputFormat::table;
           } else if (v == "csv") {
             cfg.format = tailbound::OutputFormat::csv;
           } else if (v == "json") {
             cfg.format = tailbound::OutputFormat::json;
           } else {
             throw CLI::ValidationError("--format", "must be table, csv, or json");
           }
         },
         "Output format: table, csv, json")
      ->default_str("table");
}

void add_tol_options(CLI::App* cmd, tailbound::RunConfig& cfg) {
  cmd->add_option("--abs-tol", cfg.tol.abs_tol, "Quadrature absolute tolerance");
  cmd->add_option("--rel-tol", cfg.tol.rel_tol, "Quadrature relative tolerance");
  cmd->add_option("--max-subdiv", cfg.tol.max_subdivisions,
                  "Adaptive quadrature subdivision budget");
}

}  // namespace

int main(int argc, char** argv) {
  using tailbound::RunConfig;

  CLI::App app{"Tail-probability bounds: Markov, Chernoff, fractional-moment, "
               "and operational families"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.tol = tailbound::tolerance_from_env();
  std::string out_path;

  CLI::App* bounds = app.add_subcommand("bounds", "Bound table at one threshold");
  bounds->add_option("--dist", cfg.dist_spec, "Distribution spec, e.g. exp:1")
      ->required();
  bounds->add_option("--x", cfg.x, "Threshold (> 0)")->required();
  bounds->add_option("--f", cfg.f_spec,
                     "Extra operational bound for this shift function spec");
  add_format_option(bounds, cfg);
  add_tol_options(bounds, cfg);
  bounds->add_option("--out", out_path, "Write output to a file instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "Bound table over an x grid");
  sweep->add_option("--dist", cfg.dist_spec, "Distribution spec")->required();
  sweep->add_option("--x-start", cfg.x_start, "Grid start (> 0)")->required();
  sweep->add_option("--x-stop", cfg.x_stop, "Grid stop")->required();
  sweep->add_option("--steps", cfg.steps, "Number of grid rows (>= 1)")->required();
  sweep->add_option("--f", cfg.f_spec, "Extra operational bound");
  add_format_option(sweep, cfg);
  add_tol_options(sweep, cfg);
  sweep->add_option("--out", out_path, "Write output to a file instead of stdout");

  CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--seed", cfg.seed, "Seed for randomized property cases");
  verify->add_option("--inject-density-scale", cfg.inject_density_scale,
                     "Scale catalog densities (fault injection; default 1)");
  add_format_option(verify, cfg);
  add_tol_options(verify, cfg);
  verify->add_option("--out", out_path, "Write output to a file instead of stdout");

  CLI::App* sam = app.add_subcommand("sam-check", "Strict-absolute-monotonicity probe");
  sam->add_option("--f", cfg.f_spec, "Shift function spec, e.g. logistic:1")->required();
  sam->add_option("--points", cfg.points, "Probe points")->delimiter(',');
  sam->add_option("--order", cfg.order, "Highest derivative order checked");
  add_format_option(sam, cfg);

  CLI::App* series = app.add_subcommand("series", "Operator-series application");
  series->add_option("--dist", cfg.dist_spec, "Distribution spec")->required();
  series->add_option("--f", cfg.f_spec, "Shift function spec")->required();
  series->add_option("--z", cfg.z, "Evaluation point");
  series->add_option("--order", cfg.order, "Truncation order");
  add_format_option(series, cfg);
  add_tol_options(series, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tailbound::kExitUsage;
  }

  if (bounds->parsed()) cfg.command = RunConfig::Command::bounds;
  if (sweep->parsed()) cfg.command = RunConfig::Command::sweep;
  if (verify->parsed()) cfg.command = RunConfig::Command::verify;
  if (sam->parsed()) cfg.command = RunConfig::Command::sam_check;
  if (series->parsed()) cfg.command = RunConfig::Command::series;

  const tailbound::CommandResult res = tailbound::run_command(cfg);
  if (!res.err.empty()) std::cerr << res.err;
  if (!res.out.empty()) {
    if (!out_path.empty()) {
      std::ofstream os(out_path);
      if (!os) {
        std::cerr << "error: cannot open --out path '" << out_path << "'\n";
        return tailbound::kExitUsage;
      }
      os << res.out;
    } else {
      std::cout << res.out;
    }
  }
  return res.exit_code;
}
