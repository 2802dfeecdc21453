#pragma once

#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "pkt/chart.hpp"
#include "pkt/liealg.hpp"

namespace pkt {

// Loading of chart and Lie-algebra documents. Unknown keys are rejected
// so that typos fail loudly instead of silently defaulting.

/// One check request, e.g. "jacobi" or "casimir:f" or
/// "liouville_identities:X:1" (arguments separated by ':').
struct CheckSpec {
  std::string name;
  std::vector<std::string> args;

  static CheckSpec parse(const std::string& s) {
    CheckSpec out;
    std::size_t pos = s.find(':');
    out.name = s.substr(0, pos);
    while (pos != std::string::npos) {
      const std::size_t next = s.find(':', pos + 1);
      out.args.push_back(s.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1));
      pos = next;
    }
    if (out.name.empty()) throw ModelError("empty check name");
    return out;
  }

  std::string display() const {
    std::string s = name;
    for (const auto& a : args) s += ":" + a;
    return s;
  }
};

struct ManifoldSpec {
  ChartModel model;
  SampleGrid grid;
  double tolerance = 1e-8;
  std::vector<CheckSpec> checks;
};

namespace detail_io {

using json = nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ModelError("unknown key '" + it.key() + "' in " + what);
}

/// "i,j" -> zero-based (i, j); validates 1 <= i,j <= dim.
inline std::pair<int, int> parse_index_pair(const std::string& key, int dim, const std::string& what) {
  const std::size_t comma = key.find(',');
  if (comma == std::string::npos) throw ModelError("bad index key '" + key + "' in " + what + " (expected \"i,j\")");
  int i = 0, j = 0;
  try {
    i = std::stoi(key.substr(0, comma));
    j = std::stoi(key.substr(comma + 1));
  } catch (const std::exception&) {
    throw ModelError("bad index key '" + key + "' in " + what);
  }
  if (i < 1 || i > dim || j < 1 || j > dim)
    throw ModelError("index out of range in " + what + ": '" + key + "' with dimension " + std::to_string(dim));
  return {i - 1, j - 1};
}

inline SampleGrid parse_grid(const json& j, int dim) {
  SampleGrid g = SampleGrid::cube(dim);
  if (j.is_null()) return g;
  require_keys(j, {"box", "points_per_axis", "exclusions", "extra_points"}, "grid");
  if (j.contains("box")) {
    const auto& box = j.at("box");
    if (!box.is_array() || static_cast<int>(box.size()) != dim)
      throw ModelError("grid box must list one [lo, hi] pair per coordinate");
    g.box.clear();
    for (const auto& b : box) {
      if (!b.is_array() || b.size() != 2) throw ModelError("grid box entries must be [lo, hi]");
      g.box.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
    }
  }
  if (j.contains("points_per_axis")) g.points_per_axis = j.at("points_per_axis").get<int>();
  if (j.contains("exclusions")) {
    for (const auto& e : j.at("exclusions")) {
      require_keys(e, {"center", "radius"}, "grid exclusion");
      std::vector<double> c = e.at("center").get<std::vector<double>>();
      if (static_cast<int>(c.size()) != dim) throw ModelError("exclusion center dimension mismatch");
      const double radius = e.contains("radius") ? e.at("radius").get<double>() : 0.3;
      g.exclude_ball(std::move(c), radius);
    }
  }
  if (j.contains("extra_points")) {
    for (const auto& p : j.at("extra_points")) {
      std::vector<double> q = p.get<std::vector<double>>();
      if (static_cast<int>(q.size()) != dim) throw ModelError("extra point dimension mismatch");
      g.extra_points.push_back(std::move(q));
    }
  }
  return g;
}

}  // namespace detail_io

inline ManifoldSpec parse_manifold_spec(const nlohmann::json& j) {
  using detail_io::require_keys;
  require_keys(j, {"name", "coords", "metric", "pi", "scalars", "vectors", "oneforms", "grid", "tolerance", "checks"},
               "chart document");
  if (!j.contains("coords")) throw ModelError("chart document needs a 'coords' list");
  const auto names = j.at("coords").get<std::vector<std::string>>();
  if (names.empty()) throw ModelError("'coords' must not be empty");
  {
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size()) throw ModelError("coordinate names must be distinct");
  }
  ManifoldSpec spec;
  spec.model = ChartModel::euclidean(names);
  const int dim = spec.model.dim;
  if (j.contains("name")) spec.model.name = j.at("name").get<std::string>();

  if (j.contains("metric")) {
    for (auto it = j.at("metric").begin(); it != j.at("metric").end(); ++it) {
      const auto [a, b] = detail_io::parse_index_pair(it.key(), dim, "metric");
      if (a > b) throw ModelError("metric entries must use i <= j (got '" + it.key() + "')");
      spec.model.set_metric(a, b, it.value().get<std::string>());
    }
  }
  if (j.contains("pi")) {
    for (auto it = j.at("pi").begin(); it != j.at("pi").end(); ++it) {
      const auto [a, b] = detail_io::parse_index_pair(it.key(), dim, "pi");
      if (!(a < b)) throw ModelError("pi entries must use i < j (got '" + it.key() + "')");
      spec.model.set_pi(a, b, it.value().get<std::string>());
    }
  }
  if (j.contains("scalars"))
    for (auto it = j.at("scalars").begin(); it != j.at("scalars").end(); ++it)
      spec.model.add_scalar(it.key(), it.value().get<std::string>());
  if (j.contains("vectors"))
    for (auto it = j.at("vectors").begin(); it != j.at("vectors").end(); ++it)
      spec.model.add_vector(it.key(), it.value().get<std::vector<std::string>>());
  if (j.contains("oneforms"))
    for (auto it = j.at("oneforms").begin(); it != j.at("oneforms").end(); ++it)
      spec.model.add_oneform(it.key(), it.value().get<std::vector<std::string>>());

  spec.grid = detail_io::parse_grid(j.contains("grid") ? j.at("grid") : nlohmann::json(), dim);
  if (j.contains("tolerance")) spec.tolerance = j.at("tolerance").get<double>();
  if (j.contains("checks"))
    for (const auto& c : j.at("checks")) spec.checks.push_back(CheckSpec::parse(c.get<std::string>()));
  return spec;
}

struct LieSpec {
  LieAlgebraModel algebra;
  ManifoldSpec chart_spec;  // chart, grid, tolerance and the checks to run on the induced bivector
};

inline LieSpec parse_lie_spec(const nlohmann::json& j) {
  using detail_io::require_keys;
  require_keys(j, {"name", "dim", "brackets", "r", "chart", "action"}, "Lie algebra document");
  if (!j.contains("dim")) throw ModelError("Lie algebra document needs 'dim'");
  LieSpec spec;
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ModelError("Lie algebra dimension must be positive");
  spec.algebra = LieAlgebraModel::make(dim);
  if (j.contains("name")) spec.algebra.name = j.at("name").get<std::string>();
  if (j.contains("brackets")) {
    for (auto it = j.at("brackets").begin(); it != j.at("brackets").end(); ++it) {
      const auto [a, b] = detail_io::parse_index_pair(it.key(), dim, "brackets");
      if (!(a < b)) throw ModelError("bracket entries must use i < j");
      for (auto kt = it.value().begin(); kt != it.value().end(); ++kt) {
        int k = 0;
        try {
          k = std::stoi(kt.key());
        } catch (const std::exception&) {
          throw ModelError("bad basis index '" + kt.key() + "' in brackets");
        }
        if (k < 1 || k > dim) throw ModelError("basis index out of range in brackets");
        spec.algebra.set_bracket(a, b, k - 1, kt.value().get<double>());
      }
    }
  }
  spec.algebra.validate();
  if (j.contains("r")) {
    for (auto it = j.at("r").begin(); it != j.at("r").end(); ++it) {
      const auto [a, b] = detail_io::parse_index_pair(it.key(), dim, "r");
      if (!(a < b)) throw ModelError("r entries must use i < j");
      spec.algebra.set_r(a, b, it.value().get<double>());
    }
  }
  if (!j.contains("chart")) throw ModelError("Lie algebra document needs a 'chart'");
  spec.chart_spec = parse_manifold_spec(j.at("chart"));
  if (j.contains("action")) {
    const auto& act = j.at("action");
    if (static_cast<int>(act.size()) != dim)
      throw ModelError("action must list one vector field per basis element");
    for (const auto& comps : act) {
      std::vector<ScalarExpr> field;
      for (const auto& s : comps.get<std::vector<std::string>>())
        field.push_back(parse_expression(s, spec.chart_spec.model.coords));
      if (static_cast<int>(field.size()) != spec.chart_spec.model.dim)
        throw ModelError("action vector field has wrong number of components");
      spec.algebra.action.push_back(std::move(field));
    }
  }
  return spec;
}

}  // namespace pkt
