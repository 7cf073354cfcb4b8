#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/distribution.hpp"
#include "tailbound/operational.hpp"
#include "tailbound/render.hpp"
#include "tailbound/shift_function.hpp"
#include "tailbound/verify.hpp"

namespace tailbound {

/// Exit codes shared by every subcommand (CI contract):
///   0 ok, 1 usage error, 2 property/ordering violation,
///   3 numerical non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitNonConvergent = 3;

struct RunConfig {
  enum class Command { bounds, sweep, verify, sam_check, series };

  Command command = Command::bounds;
  std::string dist_spec;
  double x = 0.0;
  double x_start = 0.0;
  double x_stop = 0.0;
  int steps = 1;
  std::string f_spec;
  OutputFormat format = OutputFormat::table;
  Tolerance tol;
  std::uint64_t seed = 12345;
  double inject_density_scale = 1.0;
  std::vector<double> points = {0.0, 0.5, 1.0, 2.0};  // sam-check probes
  int order = 16;
  double z = 0.0;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

/// Reads TAILBOUND_ABS_TOL / TAILBOUND_REL_TOL into a Tolerance; explicit
/// CLI flags override these afterwards.
inline Tolerance tolerance_from_env() {
  Tolerance tol;
  if (const char* s = std::getenv("TAILBOUND_ABS_TOL")) {
    const double v = std::strtod(s, nullptr);
    if (v > 0.0 && v < 1.0) tol.abs_tol = v;
  }
  if (const char* s = std::getenv("TAILBOUND_REL_TOL")) {
    const double v = std::strtod(s, nullptr);
    if (v > 0.0 && v < 1.0) tol.rel_tol = v;
  }
  return tol;
}

namespace detail {

inline CommandResult usage_error(const std::string& msg) {
  return {kExitUsage, "", "error: " + msg + "\n"};
}

inline int table_exit_code(const std::vector<LabeledTable>& tables) {
  bool violated = false;
  bool nonconv = false;
  for (const LabeledTable& lt : tables) {
    if (!lt.table.ordering_ok) violated = true;
    for (const BoundReport& r : lt.table.rows) {
      if (r.status == BoundStatus::nonconvergent) nonconv = true;
    }
  }
  if (nonconv) return kExitNonConvergent;
  return violated ? kExitViolation : kExitOk;
}

inline std::string render_tables(const std::vector<LabeledTable>& tables,
                                 OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return to_csv(tables);
    case OutputFormat::json: return to_json(tables);
    default: return to_table(tables);
  }
}

}  // namespace detail

inline CommandResult run_bounds(const RunConfig& cfg) {
  Distribution d;
  std::optional<ShiftFunction> extra;
  try {
    d = parse_distribution(cfg.dist_spec);
    if (!cfg.f_spec.empty()) extra = parse_shift_function(cfg.f_spec);
    if (!(cfg.x > 0.0)) throw std::domain_error("bounds: requires --x > 0");
    std::vector<LabeledTable> tables;
    tables.push_back({d.spec_string(), compare_all(d, cfg.x, cfg.tol, extra)});
    CommandResult res;
    res.out = detail::render_tables(tables, cfg.format);
    res.exit_code = detail::table_exit_code(tables);
    return res;
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  } catch (const std::domain_error& e) {
    return detail::usage_error(e.what());
  } catch (const NonConvergentError& e) {
    return {kExitNonConvergent, "", std::string("error: ") + e.what() + "\n"};
  }
}

inline CommandResult run_sweep(const RunConfig& cfg) {
  try {
    const Distribution d = parse_distribution(cfg.dist_spec);
    std::optional<ShiftFunction> extra;
    if (!cfg.f_spec.empty()) extra = parse_shift_function(cfg.f_spec);
    if (cfg.steps < 1) throw std::domain_error("sweep: requires --steps >= 1");
    if (!(cfg.x_start < cfg.x_stop)) {
      throw std::domain_error("sweep: requires --x-start < --x-stop");
    }
    if (!(cfg.x_start > 0.0)) throw std::domain_error("sweep: requires --x-start > 0");
    std::vector<LabeledTable> tables;
    for (int i = 0; i < cfg.steps; ++i) {
      const double x = cfg.steps == 1
                           ? cfg.x_start
                           : cfg.x_start + (cfg.x_stop - cfg.x_start) * i / (cfg.steps - 1);
      tables.push_back({d.spec_string(), compare_all(d, x, cfg.tol, extra)});
    }
    CommandResult res;
    res.out = detail::render_tables(tables, cfg.format);
    res.exit_code = detail::table_exit_code(tables);
    return res;
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  } catch (const std::domain_error& e) {
    return detail::usage_error(e.what());
  } catch (const NonConvergentError& e) {
    return {kExitNonConvergent, "", std::string("error: ") + e.what() + "\n"};
  }
}

inline CommandResult run_verify(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.density_scale = cfg.inject_density_scale;
  opt.tol = cfg.tol;
  const std::vector<PropertyResult> results = run_verification_suite(opt);
  CommandResult res;
  switch (cfg.format) {
    case OutputFormat::csv: res.out = verify_to_csv(results); break;
    case OutputFormat::json: res.out = verify_to_json(results); break;
    default: res.out = verify_to_text(results); break;
  }
  bool all = true;
  for (const PropertyResult& r : results) all = all && r.passed;
  res.exit_code = all ? kExitOk : kExitViolation;
  return res;
}

inline CommandResult run_sam_check(const RunConfig& cfg) {
  try {
    const ShiftFunction f = parse_shift_function(cfg.f_spec);
    const SamReport rep = sam_check(f, cfg.points, cfg.order);
    CommandResult res;
    if (cfg.format == OutputFormat::json) {
      nlohmann::ordered_json j;
      j["f"] = f.spec_string();
      j["is_sam"] = rep.is_sam;
      j["orders_checked"] = rep.orders_checked;
      j["points_checked"] = rep.points_checked;
      if (rep.first_violation) {
        j["first_violation"] = {{"order", rep.first_violation->order},
                                {"point", rep.first_violation->point},
                                {"value", rep.first_violation->value}};
      }
      res.out = j.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << "f=" << f.spec_string() << "  sam=" << (rep.is_sam ? "yes" : "no")
         << "  orders_checked=" << rep.orders_checked << "\n";
      if (rep.first_violation) {
        os << "first violation: order " << rep.first_violation->order << " at z="
           << format_double(rep.first_violation->point) << " (derivative "
           << format_double(rep.first_violation->value) << ")\n";
      }
      res.out = os.str();
    }
    return res;
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  } catch (const MissingDerivativeOracleError& e) {
    return detail::usage_error(e.what());
  }
}

inline CommandResult run_series(const RunConfig& cfg) {
  try {
    const Distribution d = parse_distribution(cfg.dist_spec);
    const ShiftFunction f = parse_shift_function(cfg.f_spec);
    const OperatorSeries s = series_coefficients(d, cfg.order, cfg.tol);
    const SeriesApplication app = apply_operator_series(s, f, cfg.z);
    CommandResult res;
    if (cfg.format == OutputFormat::json) {
      nlohmann::ordered_json j;
      j["dist"] = d.spec_string();
      j["f"] = f.spec_string();
      j["z"] = cfg.z;
      j["order"] = cfg.order;
      j["coefficients"] = s.coefficients;
      j["value"] = app.value;
      j["diverging"] = app.diverging;
      j["partial_sums"] = app.partial_sums;
      res.out = j.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << "dist=" << d.spec_string() << "  f=" << f.spec_string()
         << "  z=" << format_double(cfg.z) << "  order=" << cfg.order << "\n";
      os << "value=" << format_double(app.value)
         << "  diverging=" << (app.diverging ? "yes" : "no") << "\n";
      os << "last partial sums:";
      const std::size_t n = app.partial_sums.size();
      for (std::size_t i = n > 5 ? n - 5 : 0; i < n; ++i) {
        os << ' ' << format_double(app.partial_sums[i]);
      }
      os << "\n";
      res.out = os.str();
    }
    return res;
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  } catch (const MissingDerivativeOracleError& e) {
    return detail::usage_error(e.what());
  } catch (const NonConvergentError& e) {
    return {kExitNonConvergent, "", std::string("error: ") + e.what() + "\n"};
  }
}

inline CommandResult run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case RunConfig::Command::bounds: return run_bounds(cfg);
    case RunConfig::Command::sweep: return run_sweep(cfg);
    case RunConfig::Command::verify: return run_verify(cfg);
    case RunConfig::Command::sam_check: return run_sam_check(cfg);
    case RunConfig::Command::series: return run_series(cfg);
  }
  return detail::usage_error("unknown command");
}

}  // namespace tailbound
