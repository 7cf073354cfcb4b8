#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailbound/cli.hpp"

using namespace tailbound;
using Catch::Approx;
using nlohmann::json;

namespace {

RunConfig bounds_config(const std::string& dist, double x,
                        OutputFormat fmt = OutputFormat::json) {
  RunConfig cfg;
  cfg.command = RunConfig::Command::bounds;
  cfg.dist_spec = dist;
  cfg.x = x;
  cfg.format = fmt;
  return cfg;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  return cells;
}

void check_roundtrip_numbers(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    CHECK(std::strtod(buf, nullptr) == v);
    const json reparsed = json::parse(j.dump());
    CHECK(reparsed.get<double>() == v);
  } else if (j.is_object() || j.is_array()) {
    for (const auto& item : j) check_roundtrip_numbers(item);
  }
}

}  // namespace

TEST_CASE("run_bounds: JSON payload and exit code", "[cli]") {
  const CommandResult res = run_command(bounds_config("exp:1", 2.0));
  REQUIRE(res.exit_code == kExitOk);
  const json j = json::parse(res.out);
  CHECK(j["dist"] == "exp:1");
  CHECK(j["x"].get<double>() == 2.0);
  CHECK(j["exact"].get<double>() == Approx(0.135335).margin(1e-6));
  CHECK(j["ordering_ok"].get<bool>() == true);
  bool saw_chernoff = false;
  for (const auto& row : j["rows"]) {
    if (row["method"] == "chernoff") {
      saw_chernoff = true;
      CHECK(row["bound_raw"].get<double>() == Approx(0.735759).margin(1e-6));
    }
  }
  CHECK(saw_chernoff);
}

TEST_CASE("run_bounds: table format carries the Chernoff closed form", "[cli]") {
  const CommandResult res =
      run_command(bounds_config("normal:0,1", 1.0, OutputFormat::table));
  CHECK(res.exit_code == kExitOk);
  CHECK(res.out.find("0.6065306") != std::string::npos);
  CHECK(res.out.find("ordering=ok") != std::string::npos);
}

TEST_CASE("run_bounds: usage errors", "[cli]") {
  CHECK(run_command(bounds_config("exp:1", 0.0)).exit_code == kExitUsage);
  CHECK(run_command(bounds_config("exp:1", -3.0)).exit_code == kExitUsage);
  const CommandResult bad = run_command(bounds_config("cauchy:1", 2.0));
  CHECK(bad.exit_code == kExitUsage);
  CHECK(bad.err.find("normal:MU,SIGMA") != std::string::npos);

  RunConfig cfg = bounds_config("exp:1", 2.0);
  cfg.f_spec = "bogus:1";
  CHECK(run_command(cfg).exit_code == kExitUsage);
}

TEST_CASE("run_sweep: CSV schema and survival column", "[cli]") {
  RunConfig cfg;
  cfg.command = RunConfig::Command::sweep;
  cfg.dist_spec = "exp:1";
  cfg.x_start = 1.0;
  cfg.x_stop = 5.0;
  cfg.steps = 5;
  cfg.format = OutputFormat::csv;
  const CommandResult res = run_command(cfg);
  REQUIRE(res.exit_code == kExitOk);
  const std::vector<std::string> lines = split_lines(res.out);
  REQUIRE(lines.size() >= 1);
  CHECK(lines[0] == "dist,x,method,bound_raw,bound_clamped,argmin_alpha,argmin_z,status");
  int exact_rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cells = split_csv(lines[i]);
    REQUIRE(cells.size() == 8);
    CHECK(cells[0] == "exp:1");
    if (cells[2] == "heaviside_exact") {
      ++exact_rows;
      const double x = std::strtod(cells[1].c_str(), nullptr);
      const double raw = std::strtod(cells[3].c_str(), nullptr);
      CHECK(raw == Approx(std::exp(-x)).epsilon(1e-9));
      CHECK(cells[7] == "ok");
    }
  }
  CHECK(exact_rows == 5);
}

TEST_CASE("run_sweep: Gaussian Chernoff column is exp(-x^2/2)", "[cli]") {
  RunConfig cfg;
  cfg.command = RunConfig::Command::sweep;
  cfg.dist_spec = "normal:0,1";
  cfg.x_start = 0.5;
  cfg.x_stop = 3.0;
  cfg.steps = 4;
  cfg.format = OutputFormat::csv;
  const CommandResult res = run_command(cfg);
  REQUIRE(res.exit_code == kExitOk);
  for (const std::string& line : split_lines(res.out)) {
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() == 8 && cells[2] == "chernoff") {
      const double x = std::strtod(cells[1].c_str(), nullptr);
      const double raw = std::strtod(cells[3].c_str(), nullptr);
      CHECK(raw == Approx(std::exp(-0.5 * x * x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("run_sweep: degenerate single-step sweep equals the bounds row", "[cli]") {
  RunConfig sweep;
  sweep.command = RunConfig::Command::sweep;
  sweep.dist_spec = "exp:1";
  sweep.x_start = 2.0;
  sweep.x_stop = 3.0;
  sweep.steps = 1;
  sweep.format = OutputFormat::csv;
  const CommandResult a = run_command(sweep);

  RunConfig single = bounds_config("exp:1", 2.0, OutputFormat::csv);
  const CommandResult b = run_command(single);
  CHECK(a.out == b.out);

  sweep.x_stop = 1.0;
  CHECK(run_command(sweep).exit_code == kExitUsage);
  sweep.x_stop = 3.0;
  sweep.steps = 0;
  CHECK(run_command(sweep).exit_code == kExitUsage);
}

TEST_CASE("deterministic output for fixed config and seed", "[cli]") {
  RunConfig verify;
  verify.command = RunConfig::Command::verify;
  verify.seed = 7;
  const CommandResult a = run_command(verify);
  const CommandResult b = run_command(verify);
  CHECK(a.out == b.out);
  CHECK(a.exit_code == kExitOk);

  const CommandResult c = run_command(bounds_config("gamma:2,1", 2.5));
  const CommandResult d = run_command(bounds_config("gamma:2,1", 2.5));
  CHECK(c.out == d.out);
}

TEST_CASE("verify: fault injection fails normalization with exit 2", "[cli]") {
  RunConfig cfg;
  cfg.command = RunConfig::Command::verify;
  cfg.inject_density_scale = 0.9;
  const CommandResult res = run_command(cfg);
  CHECK(res.exit_code == kExitViolation);
  CHECK(res.out.find("FAIL distributions.density_normalization") != std::string::npos);
}

TEST_CASE("JSON numeric fields round-trip at 17 significant digits", "[cli]") {
  const CommandResult res = run_command(bounds_config("normal:0,1", 1.0));
  check_roundtrip_numbers(json::parse(res.out));

  RunConfig verify;
  verify.command = RunConfig::Command::verify;
  verify.format = OutputFormat::json;
  check_roundtrip_numbers(json::parse(run_command(verify).out));
}

TEST_CASE("sam-check and series commands", "[cli]") {
  RunConfig sam;
  sam.command = RunConfig::Command::sam_check;
  sam.f_spec = "logistic:1";
  sam.points = {1.0};
  sam.order = 3;
  sam.format = OutputFormat::json;
  const CommandResult s = run_command(sam);
  REQUIRE(s.exit_code == kExitOk);
  const json js = json::parse(s.out);
  CHECK(js["is_sam"] == false);
  CHECK(js["first_violation"]["order"] == 2);

  sam.f_spec = "step";
  CHECK(run_command(sam).exit_code == kExitUsage);  // no derivative oracle

  RunConfig series;
  series.command = RunConfig::Command::series;
  series.dist_spec = "exp:1";
  series.f_spec = "exp:1";
  series.z = 0.0;
  series.order = 40;
  series.format = OutputFormat::json;
  const CommandResult r = run_command(series);
  REQUIRE(r.exit_code == kExitOk);
  const json jr = json::parse(r.out);
  CHECK(jr["diverging"] == true);

  series.dist_spec = "normal:0,1";
  const json jn = json::parse(run_command(series).out);
  CHECK(jn["diverging"] == false);
  CHECK(jn["value"].get<double>() == Approx(std::exp(0.5)).epsilon(1e-9));
}

TEST_CASE("tolerance_from_env", "[cli]") {
  setenv("TAILBOUND_ABS_TOL", "1e-12", 1);
  setenv("TAILBOUND_REL_TOL", "1e-9", 1);
  const Tolerance t = tolerance_from_env();
  CHECK(t.abs_tol == 1e-12);
  CHECK(t.rel_tol == 1e-9);
  setenv("TAILBOUND_ABS_TOL", "not-a-number", 1);
  const Tolerance u = tolerance_from_env();
  CHECK(u.abs_tol == Tolerance{}.abs_tol);
  unsetenv("TAILBOUND_ABS_TOL");
  unsetenv("TAILBOUND_REL_TOL");
}
