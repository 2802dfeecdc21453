#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pkt/errors.hpp"
#include "pkt/expr.hpp"

namespace pkt {

/// A single coordinate chart carrying a Riemannian metric, a bivector
/// field and optional named scalar / vector / 1-form fields, all given as
/// closed-form expressions. Immutable in spirit: build once, then share.
struct ChartModel {
  int dim = 0;
  std::shared_ptr<const std::vector<std::string>> coords;
  std::string name;

  // Metric entries, dim*dim, symmetric slots share the same expression.
  std::vector<ScalarExpr> g;
  // Bivector entries for i < j in canonical (lexicographic) order; the
  // full matrix is reconstructed as pi^{ji} = -pi^{ij}, pi^{ii} = 0.
  std::vector<ScalarExpr> pi_upper;

  std::map<std::string, ScalarExpr> scalars;
  std::map<std::string, std::vector<ScalarExpr>> vectors;
  std::map<std::string, std::vector<ScalarExpr>> oneforms;

  static ChartModel euclidean(const std::vector<std::string>& coord_names) {
    ChartModel m;
    m.dim = static_cast<int>(coord_names.size());
    m.coords = std::make_shared<const std::vector<std::string>>(coord_names);
    m.g.reserve(static_cast<std::size_t>(m.dim) * static_cast<std::size_t>(m.dim));
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j)
        m.g.push_back(ScalarExpr::constant(i == j ? 1.0 : 0.0, m.coords));
    const int pairs = m.dim * (m.dim - 1) / 2;
    m.pi_upper.assign(static_cast<std::size_t>(pairs), ScalarExpr::constant(0.0, m.coords));
    return m;
  }

  const ScalarExpr& metric(int i, int j) const { return g[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)]; }

  void set_metric(int i, int j, ScalarExpr e) {
    g[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] = e;
    g[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)] = e;
  }
  void set_metric(int i, int j, const std::string& src) { set_metric(i, j, parse_expression(src, coords)); }

  static int upper_index(int i, int j, int n) {
    // rank of (i,j), i<j, in lexicographic order
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }

  const ScalarExpr& pi_entry(int i, int j) const {
    return pi_upper[static_cast<std::size_t>(upper_index(i, j, dim))];
  }
  void set_pi(int i, int j, ScalarExpr e) {
    if (!(i < j)) throw ModelError("bivector entries must use i < j");
    pi_upper[static_cast<std::size_t>(upper_index(i, j, dim))] = e;
  }
  void set_pi(int i, int j, const std::string& src) { set_pi(i, j, parse_expression(src, coords)); }

  void add_scalar(const std::string& n, const std::string& src) { scalars.insert_or_assign(n, parse_expression(src, coords)); }
  void add_vector(const std::string& n, const std::vector<std::string>& comps) {
    std::vector<ScalarExpr> v;
    for (const auto& s : comps) v.push_back(parse_expression(s, coords));
    if (static_cast<int>(v.size()) != dim) throw ModelError("vector field '" + n + "' needs " + std::to_string(dim) + " components");
    vectors.insert_or_assign(n, std::move(v));
  }
  void add_oneform(const std::string& n, const std::vector<std::string>& comps) {
    std::vector<ScalarExpr> v;
    for (const auto& s : comps) v.push_back(parse_expression(s, coords));
    if (static_cast<int>(v.size()) != dim) throw ModelError("1-form field '" + n + "' needs " + std::to_string(dim) + " components");
    oneforms.insert_or_assign(n, std::move(v));
  }
};

/// Builds the bivector with pi^{12}=f_z, pi^{13}=-f_y, pi^{23}=f_x from a
/// potential f on a 3-dimensional chart (the curl-style dictionary that
/// identifies bivectors on R^3 with 1-forms via the volume contraction).
/// The components are assembled symbolically from partial-derivative
/// expressions supplied by the caller.
struct Potential3 {
  std::string fx, fy, fz;  // expression strings for the partials
};

inline ChartModel chart_from_potential3(const std::vector<std::string>& coord_names, const Potential3& d,
                                        const std::string& f_source = "") {
  if (coord_names.size() != 3) throw ModelError("potential dictionary requires a 3-dimensional chart");
  ChartModel m = ChartModel::euclidean(coord_names);
  m.set_pi(0, 1, d.fz);
  m.set_pi(0, 2, "-(" + d.fy + ")");
  m.set_pi(1, 2, d.fx);
  if (!f_source.empty()) m.add_scalar("f", f_source);
  return m;
}

/// Rectangular sampling grid with ball exclusions and extra points.
struct SampleGrid {
  std::vector<std::pair<double, double>> box;  // per-coordinate bounds
  int points_per_axis = 5;
  std::vector<std::pair<std::vector<double>, double>> exclusions;  // (center, radius)
  std::vector<std::vector<double>> extra_points;

  static SampleGrid cube(int dim, double lo = -2.0, double hi = 2.0, int ppa = 5) {
    SampleGrid g;
    g.box.assign(static_cast<std::size_t>(dim), {lo, hi});
    g.points_per_axis = ppa;
    return g;
  }

  SampleGrid& exclude_ball(std::vector<double> center, double radius) {
    exclusions.emplace_back(std::move(center), radius);
    return *this;
  }

  bool excluded(const std::vector<double>& p) const {
    for (const auto& [c, r] : exclusions) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - c[i]) * (p[i] - c[i]);
      if (d2 < r * r) return true;
    }
    return false;
  }

  std::vector<std::vector<double>> points(int dim) const {
    if (static_cast<int>(box.size()) != dim) throw ModelError("grid box dimension mismatch");
    std::vector<std::vector<double>> out;
    const int m = points_per_axis;
    if (m < 1) throw ModelError("points_per_axis must be positive");
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
      std::vector<double> p(static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) {
        const auto [lo, hi] = box[static_cast<std::size_t>(k)];
        p[static_cast<std::size_t>(k)] = (m == 1) ? lo : lo + idx[static_cast<std::size_t>(k)] * (hi - lo) / (m - 1);
      }
      if (!excluded(p)) out.push_back(p);
      int k = dim - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == m) {
        idx[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
    for (const auto& p : extra_points)
      if (!excluded(p)) out.push_back(p);
    if (out.empty()) throw ModelError("sample grid is empty after exclusions");
    return out;
  }
};

}  // namespace pkt
