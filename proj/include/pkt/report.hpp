#pragma once

#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "pkt/checks.hpp"

namespace pkt {

// Machine-readable reports. Field order is fixed by construction
// (nlohmann::ordered_json) and doubles serialize with round-trip
// precision, so the same input always produces the same bytes. Timing is
// intentionally kept out of the document and only shown on the console.

using ReportJson = nlohmann::ordered_json;

inline bool all_pass_reports(const std::vector<CheckReport>& reps) {
  for (const auto& r : reps)
    if (!r.pass) return false;
  return true;
}

inline ReportJson report_to_json(const std::string& fixture, const std::vector<CheckReport>& reps) {
  ReportJson doc;
  doc["fixture"] = fixture;
  doc["checks"] = ReportJson::array();
  for (const auto& r : reps) {
    ReportJson c;
    c["name"] = r.name;
    c["pass"] = r.pass;
    if (r.skipped) c["skipped"] = true;
    c["tolerance"] = r.tolerance;
    c["max_residual"] = r.max_residual;
    c["worst_point"] = r.worst_point;
    c["notes"] = r.notes;
    doc["checks"].push_back(std::move(c));
  }
  doc["overall_pass"] = all_pass_reports(reps);
  return doc;
}

inline void print_report_table(std::ostream& os, const std::vector<CheckReport>& reps) {
  os << std::left << std::setw(34) << "check" << std::setw(8) << "verdict" << std::setw(14) << "max residual"
     << "worst point\n";
  for (const auto& r : reps) {
    std::ostringstream wp;
    wp << "(";
    for (std::size_t i = 0; i < r.worst_point.size(); ++i) wp << (i ? ", " : "") << r.worst_point[i];
    wp << ")";
    os << std::left << std::setw(34) << r.name << std::setw(8)
       << (r.skipped ? "skip" : (r.pass ? "pass" : "FAIL")) << std::setw(14) << std::scientific
       << std::setprecision(3) << r.max_residual << wp.str() << "\n";
    os.unsetf(std::ios::scientific);
    for (const auto& n : r.notes) os << "    - " << n << "\n";
  }
}

}  // namespace pkt
