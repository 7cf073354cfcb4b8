#pragma once

#include <charconv>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailbound/bounds.hpp"
#include "tailbound/verify.hpp"

namespace tailbound {

enum class OutputFormat { table, csv, json };

/// Shortest round-trip decimal rendering; every serialized number parses
/// back to the identical double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_ext(const ExtReal& v) {
  if (v.is_finite()) return format_double(v.value());
  return v.is_infinite() ? "inf" : "";
}

inline std::string format_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : "";
}

/// One chunk of sweep/bounds output: all rows for a single threshold.
struct LabeledTable {
  std::string dist_spec;
  ComparisonTable table;
};

// ---------------------------------------------------------------------------
// CSV: fixed column schema
//   dist,x,method,bound_raw,bound_clamped,argmin_alpha,argmin_z,status
// ---------------------------------------------------------------------------

inline std::string csv_header() {
  return "dist,x,method,bound_raw,bound_clamped,argmin_alpha,argmin_z,status";
}

inline std::string to_csv(const std::vector<LabeledTable>& tables) {
  std::string out = csv_header() + "\n";
  for (const LabeledTable& lt : tables) {
    for (const BoundReport& r : lt.table.rows) {
      out += lt.dist_spec;
      out += ',';
      out += format_double(lt.table.x);
      out += ',';
      out += to_string(r.method);
      out += ',';
      out += format_ext(r.bound_raw);
      out += ',';
      out += format_double(r.bound_clamped);
      out += ',';
      out += format_opt(r.argmin_alpha);
      out += ',';
      out += format_opt(r.argmin_z);
      out += ',';
      out += to_string(r.status);
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["method"] = to_string(r.method);
  if (r.bound_raw.is_finite()) {
    j["bound_raw"] = r.bound_raw.value();
  } else {
    j["bound_raw"] = nullptr;  // status distinguishes inf from not-computed
  }
  j["bound_clamped"] = r.bound_clamped;
  if (r.argmin_alpha) j["argmin_alpha"] = *r.argmin_alpha;
  if (r.argmin_z) j["argmin_z"] = *r.argmin_z;
  j["status"] = to_string(r.status);
  j["evaluations"] = r.evaluations;
  return j;
}

inline nlohmann::ordered_json table_to_json(const LabeledTable& lt) {
  nlohmann::ordered_json j;
  j["dist"] = lt.dist_spec;
  j["x"] = lt.table.x;
  j["exact"] = lt.table.exact;
  j["ordering_ok"] = lt.table.ordering_ok;
  j["rows"] = nlohmann::ordered_json::array();
  for (const BoundReport& r : lt.table.rows) j["rows"].push_back(report_to_json(r));
  return j;
}

inline std::string to_json(const std::vector<LabeledTable>& tables) {
  if (tables.size() == 1) return table_to_json(tables[0]).dump(2) + "\n";
  nlohmann::ordered_json j;
  j["dist"] = tables.empty() ? "" : tables[0].dist_spec;
  j["sweep"] = nlohmann::ordered_json::array();
  for (const LabeledTable& lt : tables) j["sweep"].push_back(table_to_json(lt));
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Plain-text table
// ---------------------------------------------------------------------------

inline std::string to_table(const std::vector<LabeledTable>& tables) {
  std::ostringstream os;
  for (const LabeledTable& lt : tables) {
    os << "dist=" << lt.dist_spec << "  x=" << format_double(lt.table.x)
       << "  exact=" << format_double(lt.table.exact)
       << "  ordering=" << (lt.table.ordering_ok ? "ok" : "VIOLATED") << "\n";
    os << std::left << std::setw(17) << "method" << std::setw(23) << "bound_raw"
       << std::setw(23) << "bound_clamped" << std::setw(23) << "argmin_alpha"
       << std::setw(23) << "argmin_z" << "status" << "\n";
    for (const BoundReport& r : lt.table.rows) {
      const std::string raw = r.bound_raw.is_finite() ? format_double(r.bound_raw.value())
                              : r.bound_raw.is_infinite() ? "inf"
                                                          : "-";
      os << std::left << std::setw(17) << to_string(r.method) << std::setw(23) << raw
         << std::setw(23) << format_double(r.bound_clamped) << std::setw(23)
         << (r.argmin_alpha ? format_double(*r.argmin_alpha) : "-") << std::setw(23)
         << (r.argmin_z ? format_double(*r.argmin_z) : "-") << to_string(r.status)
         << "\n";
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Verification suite rendering
// ---------------------------------------------------------------------------

inline std::string verify_to_text(const std::vector<PropertyResult>& results) {
  std::string out;
  long passed = 0;
  for (const PropertyResult& r : results) {
    out += r.passed ? "PASS " : "FAIL ";
    out += r.name + " (cases=" + std::to_string(r.cases) + ")";
    if (!r.detail.empty()) out += " " + r.detail;
    out += "\n";
    if (r.passed) ++passed;
  }
  out += "SUMMARY: " + std::to_string(passed) + "/" + std::to_string(results.size()) +
         " properties passed\n";
  return out;
}

inline std::string verify_to_csv(const std::vector<PropertyResult>& results) {
  std::string out = "property,passed,cases,detail\n";
  for (const PropertyResult& r : results) {
    std::string detail = r.detail;
    for (char& c : detail) {
      if (c == ',' || c == '\n') c = ';';
    }
    out += r.name + "," + (r.passed ? "true" : "false") + "," +
           std::to_string(r.cases) + "," + detail + "\n";
  }
  return out;
}

inline std::string verify_to_json(const std::vector<PropertyResult>& results) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const PropertyResult& r : results) {
    nlohmann::ordered_json e;
    e["property"] = r.name;
    e["passed"] = r.passed;
    e["cases"] = r.cases;
    e["detail"] = r.detail;
    j.push_back(e);
  }
  return j.dump(2) + "\n";
}

}  // namespace tailbound
