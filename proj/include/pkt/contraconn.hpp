#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pkt/fields.hpp"
#include "pkt/frame.hpp"

namespace pkt {

// The metric contravariant connection D of a pair (pi, g): the unique
// torsion-free connection along covectors that preserves the cometric.
// D_a b is recovered from the Koszul formula
//   2<D_a b, c> = pi_#(a).<b,c> + pi_#(b).<a,c> - pi_#(c).<a,b>
//               + <[c,a]_pi, b> + <[c,b]_pi, a> + <[a,b]_pi, c>
// evaluated against the coordinate coframe c = dx^k and solved with g.
//
// Assemblies are templated on the jet order J of the 1-form fields:
// J = Jet1 yields component values, J = Jet2 yields components that still
// carry exact first derivatives, which is what makes nested applications
// (curvature) possible without any symbolic differentiation.

/// Constant-coefficient 1-form field, e.g. the extension of a covector.
template <class J>
std::vector<J> constant_covector(const std::vector<double>& a, int n) {
  std::vector<J> out;
  out.reserve(a.size());
  for (double c : a) out.push_back(jet_make<J>::constant(c, n));
  return out;
}

/// dx^k as a constant-coefficient field.
template <class J>
std::vector<J> coordinate_covector(int k, int n) {
  std::vector<J> out(static_cast<std::size_t>(n), jet_make<J>::zero(n));
  out[static_cast<std::size_t>(k)] = jet_make<J>::constant(1.0, n);
  return out;
}

/// Koszul bracket [a,b]_pi = L_{pi_#(a)} b - L_{pi_#(b)} a - d(pi(a,b)).
template <class J>
Cov<lower_jet_t<J>> koszul_bracket(const PointFrame& fr, const std::vector<J>& a, const std::vector<J>& b) {
  using R = lower_jet_t<J>;
  const int n = fr.dim();
  const auto& pi = fr.bivector<J>();
  const Vecc<J> Xa = anchor<J>(n, pi, a);
  const Vecc<J> Xb = anchor<J>(n, pi, b);
  const J pab = bivector_eval<J>(n, pi, a, b);
  Cov<R> out(static_cast<std::size_t>(n), jet_make<R>::zero(n));
  for (int i = 0; i < n; ++i) {
    R acc = jet_make<R>::zero(n);
    for (int m = 0; m < n; ++m) {
      acc = acc + jet_lower(Xa[static_cast<std::size_t>(m)]) * jet_partial(b[static_cast<std::size_t>(i)], m);
      acc = acc + jet_lower(b[static_cast<std::size_t>(m)]) * jet_partial(Xa[static_cast<std::size_t>(m)], i);
      acc = acc - jet_lower(Xb[static_cast<std::size_t>(m)]) * jet_partial(a[static_cast<std::size_t>(i)], m);
      acc = acc - jet_lower(a[static_cast<std::size_t>(m)]) * jet_partial(Xb[static_cast<std::size_t>(m)], i);
    }
    acc = acc - jet_partial(pab, i);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// D_a b via the Koszul formula. Tensorial in a, derivative in b.
template <class J>
Cov<lower_jet_t<J>> metric_D(const PointFrame& fr, const std::vector<J>& a, const std::vector<J>& b) {
  using R = lower_jet_t<J>;
  const int n = fr.dim();
  const auto& pi = fr.bivector<J>();
  const auto& ginv = fr.metric_inv<J>();
  const auto& ginv_r = fr.metric_inv<R>();
  const auto& g_r = fr.metric<R>();

  const Vecc<J> Xa = anchor<J>(n, pi, a);
  const Vecc<J> Xb = anchor<J>(n, pi, b);
  const J hab = copair<J>(n, ginv, a, b);
  const Cov<R> kab = koszul_bracket<J>(fr, a, b);
  const Cov<R> a_r = lower_components(a);
  const Cov<R> b_r = lower_components(b);

  Cov<R> rhs(static_cast<std::size_t>(n), jet_make<R>::zero(n));
  for (int k = 0; k < n; ++k) {
    const std::vector<J> gamma = coordinate_covector<J>(k, n);
    const J hbg = copair<J>(n, ginv, b, gamma);
    const J hag = copair<J>(n, ginv, a, gamma);
    R acc = jet_make<R>::zero(n);
    for (int m = 0; m < n; ++m) {
      acc = acc + jet_lower(Xa[static_cast<std::size_t>(m)]) * jet_partial(hbg, m);
      acc = acc + jet_lower(Xb[static_cast<std::size_t>(m)]) * jet_partial(hag, m);
      // pi_#(dx^k)^m = pi^{km}
      acc = acc - jet_lower(pi[static_cast<std::size_t>(k) * n + m]) * jet_partial(hab, m);
    }
    const Cov<R> kga = koszul_bracket<J>(fr, gamma, a);
    const Cov<R> kgb = koszul_bracket<J>(fr, gamma, b);
    acc = acc + copair<R>(n, ginv_r, kga, b_r);
    acc = acc + copair<R>(n, ginv_r, kgb, a_r);
    const Cov<R> gamma_r = lower_components(gamma);
    acc = acc + copair<R>(n, ginv_r, kab, gamma_r);
    rhs[static_cast<std::size_t>(k)] = acc;
  }

  // 2 <D_a b, dx^k> = rhs_k, so (D_a b)_j = (1/2) g_{jk} rhs_k.
  Cov<R> out(static_cast<std::size_t>(n), jet_make<R>::zero(n));
  for (int j = 0; j < n; ++j) {
    R acc = jet_make<R>::zero(n);
    for (int k = 0; k < n; ++k) acc = acc + jet_lower(g_r[static_cast<std::size_t>(j) * n + k]) * rhs[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(j)] = acc * 0.5;
  }
  return out;
}

/// K(a,b)c = D_a D_b c - D_b D_a c - D_{[a,b]_pi} c for 1-form fields with
/// order-2 jets. The inner D is evaluated jet-through.
inline Cov<double> curvature(const PointFrame& fr, const std::vector<Jet2>& a, const std::vector<Jet2>& b,
                             const std::vector<Jet2>& c) {
  const int n = fr.dim();
  const Cov<Jet1> Dbc = metric_D<Jet2>(fr, b, c);
  const Cov<Jet1> Dac = metric_D<Jet2>(fr, a, c);
  const Cov<Jet1> a1 = lower_components(a);
  const Cov<Jet1> b1 = lower_components(b);
  const Cov<Jet1> c1 = lower_components(c);
  const Cov<double> DaDbc = metric_D<Jet1>(fr, a1, Dbc);
  const Cov<double> DbDac = metric_D<Jet1>(fr, b1, Dac);
  const Cov<Jet1> kab = koszul_bracket<Jet2>(fr, a, b);
  const Cov<double> Dkc = metric_D<Jet1>(fr, constant_covector<Jet1>(values_of(kab), n), c1);
  Cov<double> out(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j)
    out[static_cast<std::size_t>(j)] = DaDbc[static_cast<std::size_t>(j)] - DbDac[static_cast<std::size_t>(j)] - Dkc[static_cast<std::size_t>(j)];
  return out;
}

/// Torsion residual max_{i<j} |D_{dx^i} dx^j - D_{dx^j} dx^i - [dx^i,dx^j]_pi|_g.
inline double torsion_residual(const PointFrame& fr) {
  const int n = fr.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto ei = coordinate_covector<Jet1>(i, n);
      const auto ej = coordinate_covector<Jet1>(j, n);
      const Cov<double> dij = metric_D<Jet1>(fr, ei, ej);
      const Cov<double> dji = metric_D<Jet1>(fr, ej, ei);
      const Cov<double> k = koszul_bracket<Jet1>(fr, ei, ej);
      std::vector<double> t(static_cast<std::size_t>(n));
      for (int m = 0; m < n; ++m)
        t[static_cast<std::size_t>(m)] = dij[static_cast<std::size_t>(m)] - dji[static_cast<std::size_t>(m)] - k[static_cast<std::size_t>(m)];
      worst = std::max(worst, norm_cov(fr, t));
    }
  return worst;
}

/// Metric-compatibility residual
/// max |pi_#(dx^i).<dx^j,dx^k> - <D_i dx^j, dx^k> - <dx^j, D_i dx^k>|.
inline double metric_compat_residual(const PointFrame& fr) {
  const int n = fr.dim();
  const auto& pi0 = fr.bivector_values();
  const auto& ginv0 = fr.metric_inv_values();
  const auto& ginv1 = fr.metric_inv<Jet1>();
  double worst = 0.0;
  std::vector<Cov<double>> D(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      D[static_cast<std::size_t>(i) * n + j] =
          metric_D<Jet1>(fr, coordinate_covector<Jet1>(i, n), coordinate_covector<Jet1>(j, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = 0.0;
        for (int m = 0; m < n; ++m)
          lhs += pi0[static_cast<std::size_t>(i) * n + m] * jet_partial(ginv1[static_cast<std::size_t>(j) * n + k], m);
        double t1 = 0.0, t2 = 0.0;
        for (int m = 0; m < n; ++m) {
          t1 += ginv0[static_cast<std::size_t>(m) * n + k] * D[static_cast<std::size_t>(i) * n + j][static_cast<std::size_t>(m)];
          t2 += ginv0[static_cast<std::size_t>(j) * n + m] * D[static_cast<std::size_t>(i) * n + k][static_cast<std::size_t>(m)];
        }
        worst = std::max(worst, std::abs(lhs - t1 - t2));
      }
  return worst;
}

/// max_{i,j,k} |(D_{dx^i} pi)(dx^j, dx^k)|: derivative of pi along the
/// anchor minus the two connection terms.
inline double D_pi_residual(const PointFrame& fr) {
  const int n = fr.dim();
  const auto& pi0 = fr.bivector_values();
  const auto& pi1 = fr.bivector<Jet1>();
  std::vector<Cov<double>> D(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      D[static_cast<std::size_t>(i) * n + j] =
          metric_D<Jet1>(fr, coordinate_covector<Jet1>(i, n), coordinate_covector<Jet1>(j, n));
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double t1 = 0.0;
        for (int m = 0; m < n; ++m)
          t1 += pi0[static_cast<std::size_t>(i) * n + m] * jet_partial(pi1[static_cast<std::size_t>(j) * n + k], m);
        double t2 = 0.0, t3 = 0.0;
        for (int m = 0; m < n; ++m) {
          t2 += pi0[static_cast<std::size_t>(m) * n + k] * D[static_cast<std::size_t>(i) * n + j][static_cast<std::size_t>(m)];
          t3 += pi0[static_cast<std::size_t>(j) * n + m] * D[static_cast<std::size_t>(i) * n + k][static_cast<std::size_t>(m)];
        }
        worst = std::max(worst, std::abs(t1 - t2 - t3));
      }
  return worst;
}

/// Numerical rank data of pi at the frame point.
struct RankInfo {
  int rank = 0;
  double sigma_max = 0.0;
  bool ambiguous = false;
  std::string ambiguity_note;
  std::vector<std::vector<double>> kernel;  // covector basis of Ker pi_#
};

inline RankInfo pi_rank(const PointFrame& fr, double rank_tol) {
  const int n = fr.dim();
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P(i, j) = fr.bivector_values()[static_cast<std::size_t>(i) * n + j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  RankInfo info;
  info.sigma_max = (sv.size() > 0) ? sv(0) : 0.0;
  if (info.sigma_max == 0.0) {
    info.rank = 0;
    for (int k = 0; k < n; ++k) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(k)] = 1.0;
      info.kernel.push_back(std::move(e));
    }
    return info;
  }
  const double cut = rank_tol * info.sigma_max;
  for (int i = 0; i < sv.size(); ++i) {
    const double s = sv(i);
    if (s > cut) ++info.rank;
    if (s > cut && s < 10.0 * cut) {
      info.ambiguous = true;
      info.ambiguity_note = "singular value " + std::to_string(s) + " lies in the ambiguity band (" +
                            std::to_string(cut) + ", " + std::to_string(10.0 * cut) + ")";
    }
  }
  for (int k = info.rank; k < n; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = svd.matrixV()(i, k);
    info.kernel.push_back(std::move(v));
  }
  return info;
}

/// Viability of D as a foliated connection at a regular point: the
/// largest |D_a dx^k|_g over kernel covectors a (constant extensions; D
/// is tensorial in a, so only a(p) matters). Throws NumericError when the
/// singular-value split is ambiguous at rank_tol.
inline double f_connection_residual(const PointFrame& fr, double rank_tol = 1e-8) {
  const RankInfo info = pi_rank(fr, rank_tol);
  if (info.ambiguous) throw NumericError("rank of pi is ambiguous: " + info.ambiguity_note);
  const int n = fr.dim();
  double worst = 0.0;
  for (const auto& kv : info.kernel) {
    const auto a = constant_covector<Jet1>(kv, n);
    for (int k = 0; k < n; ++k) {
      const Cov<double> d = metric_D<Jet1>(fr, a, coordinate_covector<Jet1>(k, n));
      worst = std::max(worst, norm_cov(fr, d));
    }
  }
  return worst;
}

/// Residual of L_{#(a)} pi (b, c) = <D_c a, b> - <D_b a, c> for a 1-form
/// field a with order-2 jets and constant covectors b, c.
inline double formula1_residual(const PointFrame& fr, const std::vector<Jet2>& a, const std::vector<double>& b,
                                const std::vector<double>& c) {
  const int n = fr.dim();
  const Vecc<Jet2> X2 = raise<Jet2>(n, fr.metric_inv<Jet2>(), a);
  const std::vector<double> L = lie_derivative_bivector<Jet1>(fr, lower_components(X2));
  double lhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      lhs += L[static_cast<std::size_t>(i) * n + j] * b[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)];
  const Cov<Jet1> a1 = lower_components(a);
  const Cov<double> Dca = metric_D<Jet1>(fr, constant_covector<Jet1>(c, n), a1);
  const Cov<double> Dba = metric_D<Jet1>(fr, constant_covector<Jet1>(b, n), a1);
  const auto& ginv0 = fr.metric_inv_values();
  const double rhs = copair<double>(n, ginv0, Dca, b) - copair<double>(n, ginv0, Dba, c);
  return std::abs(lhs - rhs);
}

}  // namespace pkt
