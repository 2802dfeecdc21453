#pragma once

// Test-side oracles, independent of the library's evaluation paths:
// finite differences in extended precision, a Jacobiator built from
// nested brackets, and seeded generators for random expressions, charts
// and points.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pkt/pkt.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// finite differences (long double keeps the h = 1e-5 second-difference
// noise floor well below the comparison tolerance)
// ---------------------------------------------------------------------------

inline long double eval_ld(const pkt::ScalarExpr& e, const std::vector<double>& p) {
  std::vector<long double> q(p.begin(), p.end());
  return e.eval_value_ld(q);
}

inline std::vector<double> fd_gradient(const pkt::ScalarExpr& e, const std::vector<double>& p, double h = 1e-5) {
  const int n = static_cast<int>(p.size());
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::vector<long double> hi(p.begin(), p.end()), lo(p.begin(), p.end());
    hi[static_cast<std::size_t>(k)] += h;
    lo[static_cast<std::size_t>(k)] -= h;
    out[static_cast<std::size_t>(k)] =
        static_cast<double>((e.eval_value_ld(hi) - e.eval_value_ld(lo)) / (2.0L * static_cast<long double>(h)));
  }
  return out;
}

inline std::vector<double> fd_hessian(const pkt::ScalarExpr& e, const std::vector<double>& p, double h = 1e-5) {
  const int n = static_cast<int>(p.size());
  const long double hh = static_cast<long double>(h);
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  std::vector<long double> q(p.begin(), p.end());
  const long double f0 = e.eval_value_ld(q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long double v = 0.0L;
      if (i == j) {
        auto qp = q, qm = q;
        qp[static_cast<std::size_t>(i)] += hh;
        qm[static_cast<std::size_t>(i)] -= hh;
        v = (e.eval_value_ld(qp) - 2.0L * f0 + e.eval_value_ld(qm)) / (hh * hh);
      } else {
        auto qpp = q, qpm = q, qmp = q, qmm = q;
        qpp[static_cast<std::size_t>(i)] += hh;
        qpp[static_cast<std::size_t>(j)] += hh;
        qpm[static_cast<std::size_t>(i)] += hh;
        qpm[static_cast<std::size_t>(j)] -= hh;
        qmp[static_cast<std::size_t>(i)] -= hh;
        qmp[static_cast<std::size_t>(j)] += hh;
        qmm[static_cast<std::size_t>(i)] -= hh;
        qmm[static_cast<std::size_t>(j)] -= hh;
        v = (e.eval_value_ld(qpp) - e.eval_value_ld(qpm) - e.eval_value_ld(qmp) + e.eval_value_ld(qmm)) /
            (4.0L * hh * hh);
      }
      out[static_cast<std::size_t>(i) * n + j] = static_cast<double>(v);
    }
  return out;
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Jacobiator oracle: {f,{g,h}} + {g,{h,f}} + {h,{f,g}} from nested
// brackets; the inner bracket is assembled in first-order jets so its
// differential is available to the outer one.
// ---------------------------------------------------------------------------

inline pkt::Jet1 poisson_bracket_jet(const pkt::PointFrame& fr, const pkt::Jet2& a, const pkt::Jet2& b) {
  const int n = fr.dim();
  const auto& pi = fr.bivector<pkt::Jet1>();
  pkt::Jet1 acc(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc = acc + pi[static_cast<std::size_t>(i) * n + j] * pkt::jet_partial(a, i) * pkt::jet_partial(b, j);
  return acc;
}

inline double bracket_value(const pkt::PointFrame& fr, const std::vector<double>& da, const pkt::Jet1& u) {
  const int n = fr.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += fr.bivector_values()[static_cast<std::size_t>(i) * n + j] * da[static_cast<std::size_t>(i)] *
             u.g[static_cast<std::size_t>(j)];
  return acc;
}

inline double jacobiator(const pkt::PointFrame& fr, const pkt::Jet2& f, const pkt::Jet2& g, const pkt::Jet2& h) {
  const auto grad = [](const pkt::Jet2& j) { return j.g; };
  return bracket_value(fr, grad(f), poisson_bracket_jet(fr, g, h)) +
         bracket_value(fr, grad(g), poisson_bracket_jet(fr, h, f)) +
         bracket_value(fr, grad(h), poisson_bracket_jet(fr, f, g));
}

// ---------------------------------------------------------------------------
// seeded generators
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Random smooth expression over the coordinates; singular operations are
/// wrapped so that every point of the box is in the domain.
inline std::string random_expression(Rng& rng, const std::vector<std::string>& coords, int depth) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> pick_coord(0, coords.size() - 1);
  if (depth == 0) {
    std::uniform_int_distribution<int> leaf(0, 2);
    if (leaf(rng) == 0) return fmt(coef(rng));
    return coords[pick_coord(rng)];
  }
  std::uniform_int_distribution<int> pick(0, 10);
  const auto a = [&] { return random_expression(rng, coords, depth - 1); };
  switch (pick(rng)) {
    case 0: return "(" + a() + ")+(" + a() + ")";
    case 1: return "(" + a() + ")-(" + a() + ")";
    case 2: return "(" + a() + ")*(" + a() + ")";
    case 3: return "(" + a() + ")/(2+(" + coords[pick_coord(rng)] + ")^2)";
    case 4: return "sin(" + a() + ")";
    case 5: return "cos(" + a() + ")";
    case 6: return "exp(0.25*(" + coords[pick_coord(rng)] + "))";
    case 7: return "log(2+(" + coords[pick_coord(rng)] + ")^2)";
    case 8: return "sqrt(2+(" + coords[pick_coord(rng)] + ")^2)";
    case 9: return "(" + a() + ")^2";
    default: return "(" + a() + ")^3";
  }
}

/// Random polynomial of degree <= 2 with small coefficients (string form).
inline std::string random_poly(Rng& rng, const std::vector<std::string>& coords, double scale) {
  std::uniform_real_distribution<double> coef(-scale, scale);
  std::ostringstream os;
  os << fmt(coef(rng));
  for (std::size_t i = 0; i < coords.size(); ++i) os << "+(" << fmt(coef(rng)) << ")*" << coords[i];
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i; j < coords.size(); ++j)
      os << "+(" << fmt(coef(rng)) << ")*" << coords[i] << "*" << coords[j];
  return os.str();
}

inline std::vector<std::string> coord_names(int dim) {
  static const char* small[] = {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (int i = 0; i < dim; ++i) out.push_back(dim <= 4 ? small[i] : ("x" + std::to_string(i + 1)));
  return out;
}

/// Random chart: metric = identity + small quadratic perturbation
/// (positive definite on [-1.2, 1.2]^dim by diagonal dominance), bivector
/// entries random quadratics. The bivector is generally not Poisson.
inline pkt::ChartModel random_chart(Rng& rng, int dim, bool curved_metric = true) {
  auto m = pkt::ChartModel::euclidean(coord_names(dim));
  const auto& names = *m.coords;
  if (curved_metric) {
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        const std::string p = random_poly(rng, names, 0.3);
        m.set_metric(i, j, (i == j ? "1+0.05*(" : "0.05*(") + p + ")");
      }
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) m.set_pi(i, j, random_poly(rng, names, 1.0));
  return m;
}

/// Random Poisson chart on R^3: the bivector induced by a random
/// potential (pi^{12} = f_z, pi^{13} = -f_y, pi^{23} = f_x), which always
/// satisfies the Jacobi identity. Metric optionally perturbed.
inline pkt::ChartModel random_poisson_chart3(Rng& rng, bool curved_metric) {
  auto m = random_chart(rng, 3, curved_metric);
  // random quadratic potential, partials written out coefficient-wise
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
  const double c11 = coef(rng), c12 = coef(rng), c13 = coef(rng);
  const double c22 = coef(rng), c23 = coef(rng), c33 = coef(rng);
  const auto dd = [&](int k) {
    // derivative of c1 x + c2 y + c3 z + c11 x^2 + c12 xy + ... along x_k
    std::ostringstream os;
    if (k == 0) os << fmt(c1) << "+(" << fmt(2 * c11) << ")*x+(" << fmt(c12) << ")*y+(" << fmt(c13) << ")*z";
    if (k == 1) os << fmt(c2) << "+(" << fmt(c12) << ")*x+(" << fmt(2 * c22) << ")*y+(" << fmt(c23) << ")*z";
    if (k == 2) os << fmt(c3) << "+(" << fmt(c13) << ")*x+(" << fmt(c23) << ")*y+(" << fmt(2 * c33) << ")*z";
    return os.str();
  };
  m.set_pi(0, 1, dd(2));
  m.set_pi(0, 2, "-(" + dd(1) + ")");
  m.set_pi(1, 2, dd(0));
  return m;
}

inline std::vector<double> random_point(Rng& rng, int dim, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (auto& x : p) x = d(rng);
  return p;
}

// ---------------------------------------------------------------------------
// residuals of the multivector calculus identities that tie the
// divergence, the volume contraction and the flows together; all are
// valid for arbitrary bivectors (Jacobi is not assumed)
// ---------------------------------------------------------------------------

/// d(i_X mu) - i_{div X} mu for a vector field.
inline double identity_divform_vector(const pkt::PointFrame& fr, const std::vector<pkt::Jet1>& X) {
  const auto mu1 = pkt::volume_form(fr.density<pkt::Jet1>(), fr.dim());
  const pkt::Alt<double> lhs = pkt::ext_d(pkt::interior(pkt::alt_from_vector(X), mu1));
  const double divx = pkt::divergence_vector(fr, X);
  const pkt::Alt<double> rhs = pkt::values_of(mu1) * divx;
  return pkt::sup_norm(lhs - rhs);
}

/// d(i_pi mu) + i_{div pi} mu for the bivector.
inline double identity_divform_bivector(const pkt::PointFrame& fr) {
  const auto mu1 = pkt::volume_form(fr.density<pkt::Jet1>(), fr.dim());
  const pkt::Alt<pkt::Jet1> Q = pkt::alt_from_bivector(fr.bivector<pkt::Jet1>(), fr.dim());
  const pkt::Alt<double> lhs = pkt::ext_d(pkt::interior(Q, mu1));
  const pkt::Alt<double> rhs = pkt::interior(pkt::divergence(fr, Q), pkt::values_of(mu1));
  return pkt::sup_norm(lhs + rhs);
}

/// div(H_f) + (div pi)(df) for a scalar with order-2 jets.
inline double identity_div_hamiltonian(const pkt::PointFrame& fr, const pkt::Jet2& f) {
  const int n = fr.dim();
  const auto H = pkt::anchor<pkt::Jet1>(n, fr.bivector<pkt::Jet1>(), pkt::differential(f));
  const double div_h = pkt::divergence_vector(fr, H);
  const pkt::Alt<double> divpi =
      pkt::divergence(fr, pkt::alt_from_bivector(fr.bivector<pkt::Jet1>(), n));
  double paired = 0.0;
  for (int k = 0; k < n; ++k) paired += divpi.get({k}) * f.g[static_cast<std::size_t>(k)];
  return std::abs(div_h + paired);
}

/// i_{[pi,pi]} mu - d i_{pi^pi} mu + 2 i_pi d i_pi mu.
inline double identity_schouten_volume(const pkt::PointFrame& fr) {
  const int n = fr.dim();
  const auto mu1 = pkt::volume_form(fr.density<pkt::Jet1>(), n);
  const pkt::Alt<pkt::Jet1> Q = pkt::alt_from_bivector(fr.bivector<pkt::Jet1>(), n);
  const pkt::Alt<double> lhs = pkt::interior(pkt::schouten_pi_pi(fr), pkt::values_of(mu1));
  pkt::Alt<double> term1(n, lhs.q);
  if (n >= 4) term1 = pkt::ext_d(pkt::interior(pkt::wedge_power_pi<pkt::Jet1>(fr, 2), mu1));
  const pkt::Alt<double> d_ipimu = pkt::ext_d(pkt::interior(Q, mu1));
  const pkt::Alt<double> term2 = pkt::interior(pkt::values_of(Q), d_ipimu);
  return pkt::sup_norm(lhs - term1 + term2 * 2.0);
}

/// i_{[X,pi]} mu - i_X d i_pi mu - d i_X i_pi mu + (div X) i_pi mu.
inline double identity_flow_volume(const pkt::PointFrame& fr, const std::vector<pkt::Jet2>& X) {
  const int n = fr.dim();
  const auto mu1 = pkt::volume_form(fr.density<pkt::Jet1>(), n);
  const pkt::Alt<pkt::Jet1> Q = pkt::alt_from_bivector(fr.bivector<pkt::Jet1>(), n);
  const std::vector<pkt::Jet1> L = pkt::lie_derivative_bivector<pkt::Jet2>(fr, X);
  const pkt::Alt<double> lhs =
      pkt::interior(pkt::alt_from_bivector(pkt::values_of(L), n), pkt::values_of(mu1));
  const std::vector<pkt::Jet1> X1 = pkt::lower_components(X);
  const pkt::Alt<pkt::Jet1> ipimu = pkt::interior(Q, mu1);
  const pkt::Alt<double> t1 = pkt::interior(pkt::alt_from_vector(pkt::values_of(X1)), pkt::ext_d(ipimu));
  pkt::Alt<double> t2(n, lhs.q);
  if (ipimu.q > 0) t2 = pkt::ext_d(pkt::interior(pkt::alt_from_vector(X1), ipimu));
  const double divx = pkt::divergence_vector(fr, X1);
  const pkt::Alt<double> t3 = pkt::values_of(ipimu) * divx;
  return pkt::sup_norm(lhs - t1 - t2 + t3);
}

}  // namespace oracles
