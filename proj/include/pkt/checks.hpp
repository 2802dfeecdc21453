#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pkt/contraconn.hpp"
#include "pkt/fields.hpp"

namespace pkt {

/// Outcome of one check over a sample grid. `pass` holds iff the global
/// maximum residual is within tolerance and no point failed to evaluate.
struct CheckReport {
  std::string name;
  double tolerance = 0.0;
  double max_residual = 0.0;
  std::vector<double> worst_point;
  bool pass = false;
  bool skipped = false;
  std::vector<std::string> notes;
  bool eval_error = false;
  // residual at every surviving grid point, in grid order
  std::vector<std::pair<std::vector<double>, double>> point_residuals;

  double residual_at(const std::vector<double>& p) const {
    for (const auto& [q, r] : point_residuals)
      if (q == p) return r;
    throw ModelError("point not sampled by this check");
  }
};

namespace detail_checks {

inline std::string fmt_point(const std::vector<double>& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

/// Evaluates a per-point residual over the grid and folds the results.
inline CheckReport run_pointwise(const std::string& name, const ChartModel& model, const SampleGrid& grid, double tol,
                                 const std::function<double(const PointFrame&)>& residual) {
  CheckReport rep;
  rep.name = name;
  rep.tolerance = tol;
  for (const auto& p : grid.points(model.dim)) {
    try {
      PointFrame fr(model, p);
      const double r = residual(fr);
      rep.point_residuals.emplace_back(p, r);
      if (rep.worst_point.empty() || r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst_point = p;
      }
    } catch (const std::exception& e) {
      rep.eval_error = true;
      rep.notes.push_back("evaluation error at " + fmt_point(p) + ": " + e.what());
    }
  }
  rep.pass = !rep.eval_error && rep.max_residual <= tol;
  return rep;
}

}  // namespace detail_checks

// ---------------------------------------------------------------------------
// individual checks
// ---------------------------------------------------------------------------

/// Jacobi identity via the Schouten bracket: sup |[pi,pi]^{ijk}|.
inline CheckReport check_jacobi(const ChartModel& model, const SampleGrid& grid, double tol) {
  return detail_checks::run_pointwise("jacobi", model, grid, tol,
                                      [](const PointFrame& fr) { return sup_norm(schouten_pi_pi(fr)); });
}

/// Vanishing divergence of pi, certified along two independent routes:
/// the covariant contraction div pi and the closedness of i_pi mu.
inline CheckReport check_unimodular(const ChartModel& model, const SampleGrid& grid, double tol) {
  double worst_div = 0.0, worst_form = 0.0;
  CheckReport rep = detail_checks::run_pointwise("unimodular", model, grid, tol, [&](const PointFrame& fr) {
    const Alt<Jet1> Q = alt_from_bivector(fr.bivector<Jet1>(), fr.dim());
    const double r_div = sup_norm(divergence(fr, Q));
    const double r_form = sup_norm(ext_d(interior_with_volume(fr, Q)));
    worst_div = std::max(worst_div, r_div);
    worst_form = std::max(worst_form, r_form);
    return std::max(r_div, r_form);
  });
  std::ostringstream os;
  os << "max |div pi| = " << worst_div << ", max |d(i_pi mu)| = " << worst_form;
  rep.notes.push_back(os.str());
  return rep;
}

/// Casimir status of a declared scalar f: |pi_#(df)|_g and |L_{grad f} pi|.
inline CheckReport check_casimir(const ChartModel& model, const SampleGrid& grid, double tol, const std::string& fname) {
  if (!model.scalars.count(fname)) throw ModelError("scalar field '" + fname + "' is not declared");
  double worst_ham = 0.0, worst_lie = 0.0;
  CheckReport rep = detail_checks::run_pointwise("casimir:" + fname, model, grid, tol, [&](const PointFrame& fr) {
    const Jet2 f = fr.scalar_jet(fname);
    const auto hf = hamiltonian_field<Jet2>(fr, f);
    const double r1 = norm_vec(fr, values_of(hf));
    const Vecc<Jet1> grad = raise<Jet1>(fr.dim(), fr.metric_inv<Jet1>(), differential(f));
    const double r2 = norm_sup(lie_derivative_bivector<Jet1>(fr, grad));
    worst_ham = std::max(worst_ham, r1);
    worst_lie = std::max(worst_lie, r2);
    return std::max(r1, r2);
  });
  std::ostringstream os;
  os << "max |pi_#(df)|_g = " << worst_ham << ", max |L_{grad f} pi| = " << worst_lie;
  rep.notes.push_back(os.str());
  return rep;
}

/// Parallelism of pi under the metric contravariant connection.
inline CheckReport check_dpi(const ChartModel& model, const SampleGrid& grid, double tol) {
  return detail_checks::run_pointwise("dpi", model, grid, tol,
                                      [](const PointFrame& fr) { return D_pi_residual(fr); });
}

/// Torsion and metric-compatibility of the Koszul-formula connection.
inline CheckReport check_connection(const ChartModel& model, const SampleGrid& grid, double tol) {
  return detail_checks::run_pointwise("connection", model, grid, tol, [](const PointFrame& fr) {
    return std::max(torsion_residual(fr), metric_compat_residual(fr));
  });
}

namespace detail_checks {

struct RankScan {
  std::map<int, int> profile;          // rank -> count
  int modal_rank = 0;
  std::vector<std::vector<double>> ambiguous_points;
  std::vector<std::vector<double>> nonmodal_points;
};

inline RankScan scan_ranks(const ChartModel& model, const SampleGrid& grid, double rank_tol) {
  RankScan scan;
  std::vector<std::pair<std::vector<double>, int>> ranks;
  for (const auto& p : grid.points(model.dim)) {
    PointFrame fr(model, p);
    const RankInfo info = pi_rank(fr, rank_tol);
    if (info.ambiguous) {
      scan.ambiguous_points.push_back(p);
      continue;
    }
    ranks.emplace_back(p, info.rank);
    ++scan.profile[info.rank];
  }
  int best = -1;
  for (const auto& [rank, count] : scan.profile)
    if (count > best) {
      best = count;
      scan.modal_rank = rank;
    }
  for (const auto& [p, r] : ranks)
    if (r != scan.modal_rank) scan.nonmodal_points.push_back(p);
  return scan;
}

inline void annotate_rank_scan(CheckReport& rep, const RankScan& scan) {
  std::ostringstream os;
  os << "rank profile:";
  for (const auto& [rank, count] : scan.profile) os << " " << rank << "x" << count;
  os << "; regular rank " << scan.modal_rank;
  rep.notes.push_back(os.str());
  for (const auto& p : scan.ambiguous_points)
    rep.notes.push_back("warning: ambiguous rank at " + fmt_point(p) + "; point excluded");
  for (const auto& p : scan.nonmodal_points)
    rep.notes.push_back("warning: non-regular point " + fmt_point(p) + " excluded");
}

}  // namespace detail_checks

/// Foliated-connection residual over the regular sampling set (points
/// whose numerical rank equals the modal rank over the grid).
inline CheckReport check_freg(const ChartModel& model, const SampleGrid& grid, double tol, double rank_tol = 1e-8) {
  CheckReport rep;
  rep.name = "freg";
  rep.tolerance = tol;
  detail_checks::RankScan scan;
  try {
    scan = detail_checks::scan_ranks(model, grid, rank_tol);
  } catch (const std::exception& e) {
    rep.eval_error = true;
    rep.notes.push_back(std::string("evaluation error: ") + e.what());
    rep.pass = false;
    return rep;
  }
  for (const auto& p : grid.points(model.dim)) {
    bool skip = false;
    for (const auto& q : scan.ambiguous_points)
      if (q == p) skip = true;
    for (const auto& q : scan.nonmodal_points)
      if (q == p) skip = true;
    if (skip) continue;
    try {
      PointFrame fr(model, p);
      const double r = f_connection_residual(fr, rank_tol);
      rep.point_residuals.emplace_back(p, r);
      if (rep.worst_point.empty() || r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst_point = p;
      }
    } catch (const std::exception& e) {
      rep.eval_error = true;
      rep.notes.push_back("evaluation error at " + detail_checks::fmt_point(p) + ": " + e.what());
    }
  }
  detail_checks::annotate_rank_scan(rep, scan);
  rep.pass = !rep.eval_error && rep.max_residual <= tol;
  return rep;
}

/// Composite Killing-Poisson verdict: Jacobi, unimodularity and the
/// foliated-connection property on the regular set.
inline CheckReport check_killing_poisson(const ChartModel& model, const SampleGrid& grid, double tol,
                                         double rank_tol = 1e-8) {
  const CheckReport jac = check_jacobi(model, grid, tol);
  const CheckReport uni = check_unimodular(model, grid, tol);
  const CheckReport fr = check_freg(model, grid, tol, rank_tol);
  CheckReport rep;
  rep.name = "killing_poisson";
  rep.tolerance = tol;
  rep.max_residual = std::max({jac.max_residual, uni.max_residual, fr.max_residual});
  rep.pass = jac.pass && uni.pass && fr.pass;
  rep.eval_error = jac.eval_error || uni.eval_error || fr.eval_error;
  for (const CheckReport* sub : {&jac, &uni, &fr}) {
    std::ostringstream os;
    os << sub->name << ": " << (sub->pass ? "pass" : "FAIL") << " (max " << sub->max_residual << ")";
    rep.notes.push_back(os.str());
    if (sub->max_residual >= rep.max_residual && !sub->worst_point.empty()) rep.worst_point = sub->worst_point;
  }
  if (!jac.pass) rep.notes.push_back("conditional: Jacobi failed, downstream verdicts are not meaningful");
  for (const auto& n : fr.notes)
    if (n.rfind("rank profile", 0) == 0 || n.rfind("warning", 0) == 0) rep.notes.push_back(n);
  return rep;
}

/// Closedness and the length identity of alpha = i_pi mu on an oriented
/// 3-chart: d alpha = 0 and d<alpha,alpha> + delta(alpha) alpha = 0 with
/// delta(alpha) = -div(#alpha).
inline CheckReport check_kp_3d(const ChartModel& model, const SampleGrid& grid, double tol) {
  if (model.dim != 3) throw ModelError("kp3d requires a 3-dimensional chart");
  double worst_closed = 0.0, worst_len = 0.0;
  CheckReport rep = detail_checks::run_pointwise("kp3d", model, grid, tol, [&](const PointFrame& fr) {
    const Alt<Jet1> alpha = interior_with_volume(fr, alt_from_bivector(fr.bivector<Jet1>(), 3));
    const double r1 = sup_norm(ext_d(alpha));
    const Cov<Jet1>& a = alpha.comp;
    const Jet1 len = copair<Jet1>(3, fr.metric_inv<Jet1>(), a, a);
    const Vecc<Jet1> sharp = raise<Jet1>(3, fr.metric_inv<Jet1>(), a);
    const double delta = -divergence_vector(fr, sharp);
    std::vector<double> v(3);
    for (int j = 0; j < 3; ++j) v[static_cast<std::size_t>(j)] = len.g[static_cast<std::size_t>(j)] + delta * a[static_cast<std::size_t>(j)].v;
    const double r2 = norm_cov(fr, v);
    worst_closed = std::max(worst_closed, r1);
    worst_len = std::max(worst_len, r2);
    return std::max(r1, r2);
  });
  std::ostringstream os;
  os << "max |d alpha| = " << worst_closed << ", max |d<a,a>+delta(a)a|_g = " << worst_len;
  rep.notes.push_back(os.str());
  return rep;
}

/// Residual of d<df,df> + Laplacian(f) df = 0 with the Beltrami sign
/// convention Laplacian(f) = -div(grad f).
inline CheckReport check_equation_E(const ChartModel& model, const SampleGrid& grid, double tol,
                                    const std::string& fname) {
  if (model.dim != 3) throw ModelError("eqE requires a 3-dimensional chart");
  if (!model.scalars.count(fname)) throw ModelError("scalar field '" + fname + "' is not declared");
  return detail_checks::run_pointwise("eqE:" + fname, model, grid, tol, [&](const PointFrame& fr) {
    const Jet2 f = fr.scalar_jet(fname);
    const Cov<Jet1> df = differential(f);
    const Jet1 len = copair<Jet1>(3, fr.metric_inv<Jet1>(), df, df);
    const Vecc<Jet1> grad = raise<Jet1>(3, fr.metric_inv<Jet1>(), df);
    const double lap = -divergence_vector(fr, grad);
    std::vector<double> v(3);
    for (int j = 0; j < 3; ++j) v[static_cast<std::size_t>(j)] = len.g[static_cast<std::size_t>(j)] + lap * df[static_cast<std::size_t>(j)].v;
    return norm_cov(fr, v);
  });
}

/// Killing status of a declared vector field: |L_X g| decides; the
/// divergence and the commutators with gradients of declared invariant
/// scalars are reported as corroboration.
inline CheckReport check_killing_vector(const ChartModel& model, const SampleGrid& grid, double tol,
                                        const std::string& xname) {
  if (!model.vectors.count(xname)) throw ModelError("vector field '" + xname + "' is not declared");
  double worst_div = 0.0;
  std::map<std::string, double> worst_xf, worst_comm;
  CheckReport rep = detail_checks::run_pointwise("killing:" + xname, model, grid, tol, [&](const PointFrame& fr) {
    const std::vector<Jet2> X = fr.vector_jet(xname);
    std::vector<double> L;
    for (const auto& e : lie_derivative_metric<Jet2>(fr, X)) L.push_back(e.v);
    const double r = norm_sup(L);
    worst_div = std::max(worst_div, std::abs(divergence_vector(fr, lower_components(X))));
    for (const auto& [fname, fexpr] : model.scalars) {
      const Jet2 f = fexpr.eval_jet2(fr.point());
      double xf = 0.0;
      for (int k = 0; k < fr.dim(); ++k) xf += X[static_cast<std::size_t>(k)].v * f.g[static_cast<std::size_t>(k)];
      const Vecc<Jet1> grad = raise<Jet1>(fr.dim(), fr.metric_inv<Jet1>(), differential(f));
      const auto comm = vector_bracket<Jet1>(lower_components(X), grad);
      auto& a = worst_xf[fname];
      a = std::max(a, std::abs(xf));
      auto& b = worst_comm[fname];
      b = std::max(b, norm_sup(comm));
    }
    return r;
  });
  {
    std::ostringstream os;
    os << "max |div X| = " << worst_div;
    rep.notes.push_back(os.str());
  }
  for (const auto& [fname, xf] : worst_xf) {
    std::ostringstream os;
    os << "scalar " << fname << ": max |X(f)| = " << xf << ", max |[X, grad f]| = " << worst_comm[fname];
    rep.notes.push_back(os.str());
  }
  return rep;
}

/// Liouville property of a declared vector field: |[X,pi] - pi|.
inline CheckReport check_liouville(const ChartModel& model, const SampleGrid& grid, double tol,
                                   const std::string& xname) {
  if (!model.vectors.count(xname)) throw ModelError("vector field '" + xname + "' is not declared");
  return detail_checks::run_pointwise("liouville:" + xname, model, grid, tol, [&](const PointFrame& fr) {
    const std::vector<Jet2> X = fr.vector_jet(xname);
    const std::vector<Jet1> L = lie_derivative_bivector<Jet2>(fr, X);
    const auto& pi = fr.bivector<Jet1>();
    std::vector<double> d(L.size());
    for (std::size_t k = 0; k < L.size(); ++k) d[k] = L[k].v - pi[k].v;
    return norm_sup(d);
  });
}

/// Consequences of the Liouville property: the hamiltonian commutator
/// identity [X,H_f] = H_f + H_{X(f)} for coordinate f, and the two
/// equalities L_X(i_{pi^m} mu) = d i_X i_{pi^m} mu = (m + div X) i_{pi^m} mu.
inline CheckReport check_liouville_identities(const ChartModel& model, const SampleGrid& grid, double tol,
                                              const std::string& xname, int nwedge) {
  if (!model.vectors.count(xname)) throw ModelError("vector field '" + xname + "' is not declared");
  if (2 * nwedge > model.dim) throw ModelError("wedge power exceeds chart dimension");
  const CheckReport pre = check_liouville(model, grid, tol, xname);
  if (!pre.pass) {
    CheckReport rep;
    rep.name = "liouville_identities:" + xname;
    rep.tolerance = tol;
    rep.skipped = true;
    rep.pass = false;
    rep.notes.push_back("skipped: [X,pi] = pi does not hold within tolerance (max residual " +
                        std::to_string(pre.max_residual) + ")");
    return rep;
  }
  double worst_comm = 0.0, worst_cartan = 0.0, worst_scale = 0.0;
  CheckReport rep = detail_checks::run_pointwise(
      "liouville_identities:" + xname, model, grid, tol, [&](const PointFrame& fr) {
        const int n = fr.dim();
        const std::vector<Jet2> X2 = fr.vector_jet(xname);
        const std::vector<Jet1> X1 = lower_components(X2);
        double r5 = 0.0;
        for (int j = 0; j < n; ++j) {
          const Vecc<Jet1> Hf = anchor<Jet1>(n, fr.bivector<Jet1>(), coordinate_covector<Jet1>(j, n));
          const auto lhs = vector_bracket<Jet1>(X1, Hf);
          // H_{X(f)} for f = x^j: anchor applied to the differential of
          // the component function X^j
          std::vector<double> hxf(static_cast<std::size_t>(n), 0.0);
          for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
              acc += fr.bivector_values()[static_cast<std::size_t>(k) * n + i] * X2[static_cast<std::size_t>(j)].g[static_cast<std::size_t>(k)];
            hxf[static_cast<std::size_t>(i)] = acc;
          }
          std::vector<double> d(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i)
            d[static_cast<std::size_t>(i)] = lhs[static_cast<std::size_t>(i)] - Hf[static_cast<std::size_t>(i)].v - hxf[static_cast<std::size_t>(i)];
          r5 = std::max(r5, norm_sup(d));
        }
        const Alt<Jet1> w = interior_with_volume(fr, wedge_power_pi<Jet1>(fr, nwedge));
        const Alt<double> lie = lie_derivative_form(X1, w);
        Alt<double> d_ix(w.n, w.q);
        if (w.q > 0) d_ix = ext_d(interior(alt_from_vector(X1), w));
        const double divx = divergence_vector(fr, X1);
        const Alt<double> scaled = values_of(w) * (static_cast<double>(nwedge) + divx);
        const double r6a = sup_norm(lie - d_ix);
        const double r6b = sup_norm(lie - scaled);
        worst_comm = std::max(worst_comm, r5);
        worst_cartan = std::max(worst_cartan, r6a);
        worst_scale = std::max(worst_scale, r6b);
        return std::max({r5, r6a, r6b});
      });
  std::ostringstream os;
  os << "max |[X,H_f]-H_f-H_{X(f)}| = " << worst_comm << ", max |L_X w - d i_X w| = " << worst_cartan
     << ", max |L_X w - (n+div X) w| = " << worst_scale;
  rep.notes.push_back(os.str());
  return rep;
}

}  // namespace pkt
