#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pkt/errors.hpp"

namespace pkt {

// Built-in fixture documents. Charts cover the constant symplectic plane,
// the linear (quadratic-potential) family, two radial tensors on R^3 with
// their negative control, a Jacobi failure, the Heisenberg group case and
// a Liouville pair; the two Lie-algebra documents drive the action
// pipeline end to end.

inline const std::map<std::string, std::string>& chart_fixtures() {
  static const std::map<std::string, std::string> fixtures = {
      {"constant-symplectic-r2", R"json({
  "name": "constant-symplectic-r2",
  "coords": ["x", "y"],
  "pi": {"1,2": "1"},
  "grid": {"box": [[-2, 2], [-2, 2]], "points_per_axis": 5},
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "freg", "dpi", "killing_poisson"]
})json"},
      {"quadratic-family", R"json({
  "name": "quadratic-family",
  "coords": ["x", "y", "z"],
  "pi": {
    "1,2": "4*z+2*x+2*y",
    "1,3": "-(4*y-2*x+2*z)",
    "2,3": "4*x-2*y+2*z"
  },
  "scalars": {"f": "2*x^2+2*y^2+2*z^2-2*x*y+2*x*z+2*y*z"},
  "grid": {
    "box": [[-2, 2], [-2, 2], [-2, 2]],
    "points_per_axis": 5,
    "exclusions": [{"center": [0, 0, 0], "radius": 0.3}]
  },
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "freg", "dpi", "kp3d", "casimir:f", "eqE:f"]
})json"},
      {"radial-r32", R"json({
  "name": "radial-r32",
  "coords": ["x", "y", "z"],
  "pi": {
    "1,2": "3*z*sqrt(x^2+y^2+z^2)",
    "1,3": "-3*y*sqrt(x^2+y^2+z^2)",
    "2,3": "3*x*sqrt(x^2+y^2+z^2)"
  },
  "scalars": {"f": "sqrt(x^2+y^2+z^2)^3"},
  "grid": {
    "box": [[-2, 2], [-2, 2], [-2, 2]],
    "points_per_axis": 5,
    "exclusions": [{"center": [0, 0, 0], "radius": 0.3}]
  },
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "freg", "dpi", "kp3d", "casimir:f", "eqE:f"]
})json"},
      {"sqrt-so3", R"json({
  "name": "sqrt-so3",
  "coords": ["x", "y", "z"],
  "pi": {
    "1,2": "z*sqrt(x^2+y^2+z^2)",
    "1,3": "-y*sqrt(x^2+y^2+z^2)",
    "2,3": "x*sqrt(x^2+y^2+z^2)"
  },
  "scalars": {"f": "x^2+y^2+z^2"},
  "grid": {
    "box": [[-2, 2], [-2, 2], [-2, 2]],
    "points_per_axis": 5,
    "exclusions": [{"center": [0, 0, 0], "radius": 0.3}]
  },
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "freg", "dpi", "kp3d", "casimir:f", "killing_poisson"]
})json"},
      {"so3-plain", R"json({
  "name": "so3-plain",
  "coords": ["x", "y", "z"],
  "pi": {"1,2": "z", "1,3": "-y", "2,3": "x"},
  "scalars": {"f": "x^2+y^2+z^2"},
  "grid": {
    "box": [[-1, 1], [-1, 1], [-1, 1]],
    "points_per_axis": 3,
    "exclusions": [{"center": [0, 0, 0], "radius": 0.3}]
  },
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "freg", "dpi", "kp3d", "casimir:f"]
})json"},
      {"nonpoisson", R"json({
  "name": "nonpoisson",
  "coords": ["x", "y", "z"],
  "pi": {"1,2": "z", "1,3": "x"},
  "grid": {"box": [[-2, 2], [-2, 2], [-2, 2]], "points_per_axis": 5},
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular"]
})json"},
      {"heisenberg-kp", R"json({
  "name": "heisenberg-kp",
  "coords": ["x", "y", "z"],
  "metric": {"1,1": "1+y^2", "1,3": "-y", "2,2": "1", "3,3": "1"},
  "pi": {"1,3": "1"},
  "scalars": {"f": "y"},
  "vectors": {
    "Y1": ["1", "0", "0"],
    "Y2": ["0", "1", "x"],
    "Y3": ["0", "0", "1"]
  },
  "grid": {"box": [[-2, 2], [-2, 2], [-2, 2]], "points_per_axis": 5},
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "freg", "dpi", "kp3d", "casimir:f", "killing:Y1", "killing:Y2", "killing:Y3"]
})json"},
      {"liouville-r2", R"json({
  "name": "liouville-r2",
  "coords": ["x", "y"],
  "pi": {"1,2": "1"},
  "vectors": {"X": ["-x", "0"]},
  "grid": {"box": [[-2, 2], [-2, 2]], "points_per_axis": 5},
  "tolerance": 1e-8,
  "checks": ["jacobi", "unimodular", "liouville:X", "liouville_identities:X:1"]
})json"},
  };
  return fixtures;
}

inline const std::map<std::string, std::string>& lie_fixtures() {
  static const std::map<std::string, std::string> fixtures = {
      {"heisenberg-lie", R"json({
  "name": "heisenberg-lie",
  "dim": 3,
  "brackets": {"1,2": {"3": 1.0}},
  "r": {"1,3": 1.0},
  "chart": {
    "name": "heisenberg-lie",
    "coords": ["x", "y", "z"],
    "metric": {"1,1": "1+y^2", "1,3": "-y", "2,2": "1", "3,3": "1"},
    "scalars": {"f": "y"},
    "grid": {"box": [[-2, 2], [-2, 2], [-2, 2]], "points_per_axis": 5},
    "tolerance": 1e-8,
    "checks": ["jacobi", "unimodular", "freg", "dpi", "kp3d", "casimir:f", "killing_poisson"]
  },
  "action": [["1", "0", "0"], ["0", "1", "x"], ["0", "0", "1"]]
})json"},
      {"aff1-lie", R"json({
  "name": "aff1-lie",
  "dim": 2,
  "brackets": {"1,2": {"2": 1.0}},
  "r": {"1,2": 1.0},
  "chart": {
    "name": "aff1-lie",
    "coords": ["x", "y"],
    "metric": {"1,1": "1/y^2", "2,2": "1/y^2"},
    "grid": {"box": [[-2, 2], [0.5, 2.5]], "points_per_axis": 5},
    "tolerance": 1e-8,
    "checks": ["jacobi", "unimodular"]
  },
  "action": [["-x", "-y"], ["1", "0"]]
})json"},
  };
  return fixtures;
}

inline std::vector<std::string> chart_fixture_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : chart_fixtures()) names.push_back(k);
  return names;
}

inline const std::string& fixture_source(const std::string& name) {
  if (auto it = chart_fixtures().find(name); it != chart_fixtures().end()) return it->second;
  if (auto it = lie_fixtures().find(name); it != lie_fixtures().end()) return it->second;
  throw ModelError("unknown fixture '" + name + "'");
}

}  // namespace pkt
