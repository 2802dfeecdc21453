// pkt - residual checks for Poisson structures paired with Riemannian
// metrics on coordinate charts.
//
// Exit codes: 0 all requested checks pass, 1 at least one check fails,
// 2 invalid input (bad document, bad expression, bad flags).

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pkt/pkt.hpp"

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pkt::ModelError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw pkt::ModelError("invalid JSON in '" + path + "': " + e.what());
  }
}

struct CheckOptions {
  std::string spec_path;
  double tol_override = -1.0;
  int grid_override = 0;
  std::string checks_override;
  std::string report_path;
};

std::vector<pkt::CheckSpec> parse_check_list(const std::string& csv) {
  std::vector<pkt::CheckSpec> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string item = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(pkt::CheckSpec::parse(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int finish(const std::string& fixture, const std::vector<pkt::CheckReport>& reports, const std::string& report_path,
           double elapsed_ms) {
  if (!report_path.empty()) {
    const pkt::ReportJson doc = pkt::report_to_json(fixture, reports);
    std::ofstream out(report_path);
    if (!out) throw pkt::ModelError("cannot write '" + report_path + "'");
    out << doc.dump(2) << "\n";
  } else {
    pkt::print_report_table(std::cout, reports);
  }
  const bool ok = pkt::all_pass_reports(reports);
  std::cout << fixture << ": " << (ok ? "all checks pass" : "CHECKS FAILED") << " (" << reports.size()
            << " checks, " << static_cast<long>(elapsed_ms) << " ms)\n";
  return ok ? 0 : 1;
}

int cmd_check(const CheckOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  pkt::ManifoldSpec spec = pkt::parse_manifold_spec(load_json(opt.spec_path));
  if (opt.tol_override > 0) spec.tolerance = opt.tol_override;
  if (opt.grid_override > 0) spec.grid.points_per_axis = opt.grid_override;
  std::vector<pkt::CheckSpec> checks =
      opt.checks_override.empty() ? spec.checks : parse_check_list(opt.checks_override);
  if (checks.empty()) throw pkt::ModelError("no checks requested (document has no 'checks' and no --checks given)");
  const std::string fixture = spec.model.name.empty() ? opt.spec_path : spec.model.name;
  const auto reports = pkt::run_checks(spec.model, spec.grid, spec.tolerance, checks);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish(fixture, reports, opt.report_path, ms);
}

int cmd_lie(const CheckOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  pkt::LieSpec spec = pkt::parse_lie_spec(load_json(opt.spec_path));
  if (opt.tol_override > 0) spec.chart_spec.tolerance = opt.tol_override;
  if (opt.grid_override > 0) spec.chart_spec.grid.points_per_axis = opt.grid_override;
  const double tol = spec.chart_spec.tolerance;
  const auto& chart = spec.chart_spec.model;
  const auto& grid = spec.chart_spec.grid;
  std::vector<pkt::CheckReport> reports;

  {
    pkt::CheckReport rep;
    rep.name = "structure_constants";
    rep.tolerance = 1e-12;
    rep.max_residual = spec.algebra.jacobi_residual();
    rep.pass = rep.max_residual <= rep.tolerance;
    reports.push_back(rep);
  }
  if (spec.algebra.r) {
    pkt::CheckReport rep;
    rep.name = "cybe";
    rep.tolerance = tol;
    rep.max_residual = pkt::sup_norm(pkt::cybe_bracket(spec.algebra));
    rep.pass = rep.max_residual <= tol;
    reports.push_back(rep);

    const pkt::UnimodularityReport uni = pkt::unimodularity_check(spec.algebra, tol);
    pkt::CheckReport urep;
    urep.name = "unimodularity";
    urep.tolerance = tol;
    urep.max_residual = uni.closure_residual;
    for (double t : uni.traces) urep.max_residual = std::max(urep.max_residual, std::abs(t));
    urep.pass = uni.unimodular;
    {
      std::ostringstream os;
      os << "Im r dimension " << uni.basis.size() << "; ad traces:";
      for (double t : uni.traces) os << " " << t;
      urep.notes.push_back(os.str());
    }
    if (!uni.closed) urep.notes.push_back("Im r is not closed under the bracket (bad input?)");
    reports.push_back(urep);
  }
  if (!spec.algebra.action.empty()) {
    reports.push_back(pkt::action_homomorphism_check(spec.algebra, chart, grid, tol));
    for (int i = 0; i < spec.algebra.dim; ++i) {
      pkt::ChartModel with_field = chart;
      std::vector<std::string> comps;
      for (const auto& e : spec.algebra.action[static_cast<std::size_t>(i)]) comps.push_back(e.to_string());
      with_field.add_vector("Gamma" + std::to_string(i + 1), comps);
      pkt::CheckReport rep = pkt::check_killing_vector(with_field, grid, tol, "Gamma" + std::to_string(i + 1));
      reports.push_back(std::move(rep));
    }
  }
  if (spec.algebra.r && !spec.algebra.action.empty()) {
    const pkt::ChartModel induced = pkt::induced_bivector(spec.algebra, chart);
    auto chart_reports = pkt::run_checks(induced, grid, tol, spec.chart_spec.checks);
    for (auto& r : chart_reports) {
      r.name = "induced." + r.name;
      reports.push_back(std::move(r));
    }
  }
  const std::string fixture = spec.algebra.name.empty() ? opt.spec_path : spec.algebra.name;
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish(fixture, reports, opt.report_path, ms);
}

int cmd_examples_list() {
  std::cout << "charts:\n";
  for (const auto& name : pkt::chart_fixture_names()) std::cout << "  " << name << "\n";
  std::cout << "lie-algebras:\n";
  for (const auto& [name, src] : pkt::lie_fixtures()) std::cout << "  " << name << "\n";
  return 0;
}

int cmd_examples_emit(const std::string& name, const std::string& dir) {
  const std::string& src = pkt::fixture_source(name);
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / (name + ".json");
  std::ofstream out(path);
  if (!out) throw pkt::ModelError("cannot write '" + path.string() + "'");
  out << src << "\n";
  std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pkt - residual checks for Poisson structures on Riemannian charts"};
  app.require_subcommand(1);

  CheckOptions check_opt;
  CLI::App* check = app.add_subcommand("check", "run checks from a chart document");
  check->add_option("spec", check_opt.spec_path, "chart document (JSON)")->required();
  check->add_option("--tol", check_opt.tol_override, "tolerance override");
  check->add_option("--grid", check_opt.grid_override, "points per axis override");
  check->add_option("--checks", check_opt.checks_override, "comma-separated check list override");
  check->add_option("--report", check_opt.report_path, "write the JSON report here instead of a table");

  CheckOptions lie_opt;
  CLI::App* lie = app.add_subcommand("lie", "run the Lie-algebra action pipeline");
  lie->add_option("spec", lie_opt.spec_path, "Lie algebra document (JSON)")->required();
  lie->add_option("--tol", lie_opt.tol_override, "tolerance override");
  lie->add_option("--grid", lie_opt.grid_override, "points per axis override");
  lie->add_option("--report", lie_opt.report_path, "write the JSON report here instead of a table");

  CLI::App* examples = app.add_subcommand("examples", "list or emit built-in fixtures");
  CLI::App* list = examples->add_subcommand("list", "list fixture names");
  std::string emit_name, emit_dir = ".";
  CLI::App* emit = examples->add_subcommand("emit", "write a fixture document to a directory");
  emit->add_option("name", emit_name, "fixture name")->required();
  emit->add_option("dir", emit_dir, "output directory (default .)");
  examples->require_subcommand(1);

  try {
    app.parse(argc, argv);
    if (*check) return cmd_check(check_opt);
    if (*lie) return cmd_lie(lie_opt);
    if (*list) return cmd_examples_list();
    if (*emit) return cmd_examples_emit(emit_name, emit_dir);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const pkt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pkt::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
