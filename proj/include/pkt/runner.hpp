#pragma once

#include <string>
#include <vector>

#include "pkt/checks.hpp"
#include "pkt/specio.hpp"

namespace pkt {

/// Runs one named check against a model/grid/tolerance triple.
inline CheckReport run_check(const ChartModel& model, const SampleGrid& grid, double tol, const CheckSpec& spec) {
  auto need_arg = [&](std::size_t k) -> const std::string& {
    if (spec.args.size() <= k) throw ModelError("check '" + spec.name + "' needs an argument (e.g. '" + spec.name + ":f')");
    return spec.args[k];
  };
  if (spec.name == "jacobi") return check_jacobi(model, grid, tol);
  if (spec.name == "unimodular") return check_unimodular(model, grid, tol);
  if (spec.name == "freg") return check_freg(model, grid, tol);
  if (spec.name == "dpi") return check_dpi(model, grid, tol);
  if (spec.name == "connection") return check_connection(model, grid, tol);
  if (spec.name == "killing_poisson") return check_killing_poisson(model, grid, tol);
  if (spec.name == "kp3d") return check_kp_3d(model, grid, tol);
  if (spec.name == "eqE") return check_equation_E(model, grid, tol, need_arg(0));
  if (spec.name == "casimir") return check_casimir(model, grid, tol, need_arg(0));
  if (spec.name == "killing") return check_killing_vector(model, grid, tol, need_arg(0));
  if (spec.name == "liouville") return check_liouville(model, grid, tol, need_arg(0));
  if (spec.name == "liouville_identities") {
    const int m = spec.args.size() > 1 ? std::stoi(spec.args[1]) : 1;
    return check_liouville_identities(model, grid, tol, need_arg(0), m);
  }
  throw ModelError("unknown check '" + spec.name + "'");
}

/// Runs a list of checks. A Jacobi failure marks the later verdicts as
/// conditional (they still run).
inline std::vector<CheckReport> run_checks(const ChartModel& model, const SampleGrid& grid, double tol,
                                           const std::vector<CheckSpec>& specs) {
  std::vector<CheckReport> out;
  bool jacobi_failed = false;
  for (const auto& spec : specs) {
    CheckReport rep = run_check(model, grid, tol, spec);
    if (spec.name == "jacobi" && !rep.pass) jacobi_failed = true;
    if (jacobi_failed && spec.name != "jacobi")
      rep.notes.push_back("conditional: Jacobi failed earlier, verdict assumes a Poisson tensor");
    out.push_back(std::move(rep));
  }
  return out;
}

inline bool all_pass(const std::vector<CheckReport>& reps) {
  for (const auto& r : reps)
    if (!r.pass) return false;
  return true;
}

}  // namespace pkt
