#pragma once

#include <Eigen/Dense>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pkt/alt.hpp"
#include "pkt/chart.hpp"
#include "pkt/checks.hpp"

namespace pkt {

/// Finite-dimensional Lie algebra by structure constants c^k_{ij}
/// ([e_i, e_j] = c^k_{ij} e_k), an optional antisymmetric r-matrix and an
/// optional infinitesimal action on a chart (one vector field per basis
/// element). Structure constants are validated at load: antisymmetry is
/// enforced by construction, the Jacobi identity to 1e-12.
struct LieAlgebraModel {
  int dim = 0;
  std::string name;
  std::vector<double> c;                  // c[(k*dim + i)*dim + j]
  std::optional<std::vector<double>> r;   // dim*dim, antisymmetric
  std::vector<std::vector<ScalarExpr>> action;  // per basis element, chart components

  double structure(int k, int i, int j) const {
    return c[(static_cast<std::size_t>(k) * dim + static_cast<std::size_t>(i)) * dim + static_cast<std::size_t>(j)];
  }

  static LieAlgebraModel make(int dim) {
    LieAlgebraModel L;
    L.dim = dim;
    L.c.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
    return L;
  }

  /// Sets c^k_{ij} = v and c^k_{ji} = -v (requires i != j).
  void set_bracket(int i, int j, int k, double v) {
    if (i == j) throw ModelError("bracket [e_i, e_i] must vanish");
    c[(static_cast<std::size_t>(k) * dim + static_cast<std::size_t>(i)) * dim + static_cast<std::size_t>(j)] = v;
    c[(static_cast<std::size_t>(k) * dim + static_cast<std::size_t>(j)) * dim + static_cast<std::size_t>(i)] = -v;
  }

  void set_r(int i, int j, double v) {
    if (!r) r.emplace(static_cast<std::size_t>(dim) * dim, 0.0);
    if (i == j) throw ModelError("r-matrix diagonal must vanish");
    (*r)[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(j)] = v;
    (*r)[static_cast<std::size_t>(j) * dim + static_cast<std::size_t>(i)] = -v;
  }

  std::vector<double> bracket(const std::vector<double>& u, const std::vector<double>& v) const {
    std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
    for (int k = 0; k < dim; ++k) {
      double acc = 0.0;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) acc += structure(k, i, j) * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
  }

  /// Jacobi residual of the structure constants (sup norm).
  double jacobi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) {
            double acc = 0.0;
            for (int m = 0; m < dim; ++m)
              acc += structure(m, i, j) * structure(l, m, k) + structure(m, j, k) * structure(l, m, i) +
                     structure(m, k, i) * structure(l, m, j);
            worst = std::max(worst, std::abs(acc));
          }
    return worst;
  }

  void validate() const {
    if (jacobi_residual() > 1e-12)
      throw ModelError("structure constants violate the Jacobi identity (residual " +
                       std::to_string(jacobi_residual()) + ")");
  }
};

/// Algebraic bracket [r,r] on the dual basis:
/// [r,r](a,b,c) = a([r(b),r(c)]) + b([r(c),r(a)]) + c([r(a),r(b)]) with
/// r(a)^i = r^{ij} a_j, so that a(r(b)) = r(a,b). Zero iff r solves the
/// classical Yang-Baxter equation.
inline Alt<double> cybe_bracket(const LieAlgebraModel& L) {
  if (!L.r) throw ModelError("no r-matrix declared");
  const int n = L.dim;
  const auto& r = *L.r;
  auto rat = [&](int a, int b) { return r[static_cast<std::size_t>(a) * n + b]; };
  Alt<double> out(n, 3);
  for (long idx = 0; idx < out.size(); ++idx) {
    const IndexTuple t = comb_unrank(n, 3, idx);
    const int i = t[0], j = t[1], k = t[2];
    double acc = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        acc += L.structure(i, a, b) * rat(a, j) * rat(b, k);
        acc += L.structure(j, a, b) * rat(a, k) * rat(b, i);
        acc += L.structure(k, a, b) * rat(a, i) * rat(b, j);
      }
    out.comp[static_cast<std::size_t>(idx)] = acc;
  }
  return out;
}

/// Unimodularity of the subalgebra Im r: basis extraction by rank-revealing
/// LU, closure under the bracket, and the trace of each restricted ad.
struct UnimodularityReport {
  std::vector<std::vector<double>> basis;  // basis of Im r
  std::vector<double> traces;              // trace of ad_{basis[k]} restricted to Im r
  double closure_residual = 0.0;
  bool closed = false;
  bool unimodular = false;
};

inline UnimodularityReport unimodularity_check(const LieAlgebraModel& L, double tol) {
  if (!L.r) throw ModelError("no r-matrix declared");
  const int n = L.dim;
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = (*L.r)[static_cast<std::size_t>(i) * n + j];
  UnimodularityReport rep;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  lu.setThreshold(1e-10);
  const int rank = static_cast<int>(lu.rank());
  if (rank == 0) {  // Im r = 0, vacuously unimodular
    rep.closed = true;
    rep.unimodular = true;
    return rep;
  }
  const Eigen::MatrixXd B = lu.image(R);  // n x rank, columns of R
  for (int c = 0; c < rank; ++c) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = B(i, c);
    rep.basis.push_back(std::move(v));
  }
  // coordinates of brackets in the basis, via least squares
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  rep.closed = true;
  for (int a = 0; a < rank; ++a) {
    double trace = 0.0;
    for (int b = 0; b < rank; ++b) {
      const std::vector<double> w = L.bracket(rep.basis[static_cast<std::size_t>(a)], rep.basis[static_cast<std::size_t>(b)]);
      Eigen::VectorXd wv(n);
      for (int i = 0; i < n; ++i) wv(i) = w[static_cast<std::size_t>(i)];
      const Eigen::VectorXd x = qr.solve(wv);
      const double res = (B * x - wv).lpNorm<Eigen::Infinity>();
      rep.closure_residual = std::max(rep.closure_residual, res);
      trace += x(b);
    }
    rep.traces.push_back(trace);
  }
  if (rep.closure_residual > tol) rep.closed = false;
  rep.unimodular = rep.closed;
  for (double t : rep.traces)
    if (std::abs(t) > tol) rep.unimodular = false;
  return rep;
}

/// Homomorphism residual of the action:
/// max |[Gamma(e_i), Gamma(e_j)] - c^k_{ij} Gamma(e_k)| over the grid.
inline CheckReport action_homomorphism_check(const LieAlgebraModel& L, const ChartModel& chart,
                                             const SampleGrid& grid, double tol) {
  if (L.action.empty()) throw ModelError("no action declared");
  return detail_checks::run_pointwise("action_homomorphism", chart, grid, tol, [&](const PointFrame& fr) {
    const int n = chart.dim;
    std::vector<std::vector<Jet2>> G;
    for (const auto& comps : L.action) G.push_back(fr.eval_components(comps));
    double worst = 0.0;
    for (int i = 0; i < L.dim; ++i)
      for (int j = i + 1; j < L.dim; ++j) {
        const auto br = vector_bracket<Jet2>(G[static_cast<std::size_t>(i)], G[static_cast<std::size_t>(j)]);
        std::vector<double> d(static_cast<std::size_t>(n), 0.0);
        for (int m = 0; m < n; ++m) {
          double acc = br[static_cast<std::size_t>(m)].v;
          for (int k = 0; k < L.dim; ++k)
            acc -= L.structure(k, i, j) * G[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)].v;
          d[static_cast<std::size_t>(m)] = acc;
        }
        worst = std::max(worst, norm_sup(d));
      }
    return worst;
  });
}

/// The induced bivector Gamma(r)^{ab} = sum_{i<j} r^{ij} (G_i^a G_j^b - G_i^b G_j^a),
/// assembled symbolically and installed into a copy of the chart.
inline ChartModel induced_bivector(const LieAlgebraModel& L, const ChartModel& chart) {
  if (!L.r) throw ModelError("no r-matrix declared");
  if (L.action.empty()) throw ModelError("no action declared");
  ChartModel out = chart;
  const int n = chart.dim;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::optional<ScalarExpr> sum;
      for (int i = 0; i < L.dim; ++i)
        for (int j = i + 1; j < L.dim; ++j) {
          const double rij = (*L.r)[static_cast<std::size_t>(i) * L.dim + j];
          if (rij == 0.0) continue;
          const ScalarExpr& Gia = L.action[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
          const ScalarExpr& Gib = L.action[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
          const ScalarExpr& Gja = L.action[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
          const ScalarExpr& Gjb = L.action[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
          ScalarExpr term = ScalarExpr::binary(ExprKind::Sub, ScalarExpr::binary(ExprKind::Mul, Gia, Gjb),
                                               ScalarExpr::binary(ExprKind::Mul, Gib, Gja));
          if (rij != 1.0)
            term = ScalarExpr::binary(ExprKind::Mul, ScalarExpr::constant(rij, chart.coords), term);
          sum = sum ? ScalarExpr::binary(ExprKind::Add, *sum, term) : term;
        }
      out.set_pi(a, b, sum ? *sum : ScalarExpr::constant(0.0, chart.coords));
    }
  return out;
}

/// Linear tensor pi^{ij}(x) = c^k_{ij} x_k on the dual, with coordinates
/// named x,y,z,... for small dimension. The sign matches the convention
/// that the cross-product algebra yields z dx^dy - y dx^dz + x dy^dz.
inline ChartModel lie_poisson(const LieAlgebraModel& L) {
  std::vector<std::string> names;
  static const char* small[] = {"x", "y", "z", "w"};
  for (int i = 0; i < L.dim; ++i)
    names.push_back(L.dim <= 4 ? small[i] : ("x" + std::to_string(i + 1)));
  ChartModel m = ChartModel::euclidean(names);
  for (int i = 0; i < L.dim; ++i)
    for (int j = i + 1; j < L.dim; ++j) {
      std::optional<ScalarExpr> sum;
      for (int k = 0; k < L.dim; ++k) {
        const double ck = L.structure(k, i, j);
        if (ck == 0.0) continue;
        ScalarExpr term = ScalarExpr::variable(k, m.coords);
        if (ck != 1.0) term = ScalarExpr::binary(ExprKind::Mul, ScalarExpr::constant(ck, m.coords), term);
        sum = sum ? ScalarExpr::binary(ExprKind::Add, *sum, term) : term;
      }
      if (sum) m.set_pi(i, j, *sum);
    }
  return m;
}

}  // namespace pkt
