#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pkt/alt.hpp"
#include "pkt/frame.hpp"

namespace pkt {

// Tensor calculus on a PointFrame. Assemblies are templated on the jet
// order J of their inputs; operations that consume a derivative return
// components one order lower (lower_jet_t<J>), algebraic contractions
// keep the order. Running an assembly with J = Jet2 therefore yields
// results that still carry exact first derivatives ("jet-through"
// evaluation), which is how nested covariant operations are built.

template <class S>
using Cov = std::vector<S>;  // covector / 1-form components
template <class S>
using Vecc = std::vector<S>;  // vector components

// ---------------------------------------------------------------------------
// pointwise contractions
// ---------------------------------------------------------------------------

/// Anchor map, (pi_# a)^i = pi^{ji} a_j; sign fixed by b(pi_#(a)) = pi(a,b).
template <class S>
Vecc<S> anchor(int n, const std::vector<S>& pi, const Cov<S>& a) {
  Vecc<S> out(static_cast<std::size_t>(n), jet_make<S>::zero(n));
  for (int i = 0; i < n; ++i) {
    S acc = jet_make<S>::zero(n);
    for (int j = 0; j < n; ++j) acc = acc + pi[static_cast<std::size_t>(j) * n + i] * a[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// pi(a, b) = pi^{ij} a_i b_j.
template <class S>
S bivector_eval(int n, const std::vector<S>& pi, const Cov<S>& a, const Cov<S>& b) {
  S acc = jet_make<S>::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc = acc + pi[static_cast<std::size_t>(i) * n + j] * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  return acc;
}

/// Cometric pairing <a, b> = g^{ij} a_i b_j.
template <class S>
S copair(int n, const std::vector<S>& ginv, const Cov<S>& a, const Cov<S>& b) {
  S acc = jet_make<S>::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc = acc + ginv[static_cast<std::size_t>(i) * n + j] * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  return acc;
}

/// Musical isomorphisms of g.
template <class S>
Vecc<S> raise(int n, const std::vector<S>& ginv, const Cov<S>& a) {
  Vecc<S> out(static_cast<std::size_t>(n), jet_make<S>::zero(n));
  for (int i = 0; i < n; ++i) {
    S acc = jet_make<S>::zero(n);
    for (int j = 0; j < n; ++j) acc = acc + ginv[static_cast<std::size_t>(i) * n + j] * a[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}
template <class S>
Cov<S> lower(int n, const std::vector<S>& g, const Vecc<S>& x) {
  Cov<S> out(static_cast<std::size_t>(n), jet_make<S>::zero(n));
  for (int i = 0; i < n; ++i) {
    S acc = jet_make<S>::zero(n);
    for (int j = 0; j < n; ++j) acc = acc + g[static_cast<std::size_t>(i) * n + j] * x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// df as a covector one jet order below f.
template <class J>
Cov<lower_jet_t<J>> differential(const J& f) {
  const int n = f.dim();
  Cov<lower_jet_t<J>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(jet_partial(f, k));
  return out;
}

template <class J>
std::vector<lower_jet_t<J>> lower_components(const std::vector<J>& v) {
  std::vector<lower_jet_t<J>> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(jet_lower(x));
  return out;
}

// norms
inline double norm_sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
/// Length of a covector in the cometric, sqrt(g^{ij} a_i a_j).
inline double norm_cov(const PointFrame& fr, const std::vector<double>& a) {
  return std::sqrt(std::max(0.0, copair(fr.dim(), fr.metric_inv_values(), a, a)));
}
/// Length of a vector in the metric.
inline double norm_vec(const PointFrame& fr, const std::vector<double>& x) {
  const int n = fr.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += fr.metric_values()[static_cast<std::size_t>(i) * n + j] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
  return std::sqrt(std::max(0.0, acc));
}

// ---------------------------------------------------------------------------
// derivative-consuming assemblies
// ---------------------------------------------------------------------------

/// Hamiltonian field H_f = pi_#(df); H_f(h) = {f,h} = pi(df,dh).
template <class J>
Vecc<lower_jet_t<J>> hamiltonian_field(const PointFrame& fr, const J& f) {
  using R = lower_jet_t<J>;
  return anchor<R>(fr.dim(), fr.bivector<R>(), differential(f));
}

/// Schouten bracket of the bivector with itself:
/// [pi,pi]^{ijk} = 2 sum_l (pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki} + pi^{kl} d_l pi^{ij}),
/// normalized so that [pi,pi](df,dg,dh) = 2 * Jacobiator(f,g,h).
inline Alt<double> schouten_pi_pi(const PointFrame& fr) {
  const int n = fr.dim();
  const auto& pi = fr.bivector<Jet1>();
  auto at = [&](int i, int j) -> const Jet1& { return pi[static_cast<std::size_t>(i) * n + j]; };
  Alt<double> out(n, 3);
  for (long r = 0; r < out.size(); ++r) {
    const IndexTuple t = comb_unrank(n, 3, r);
    const int i = t[0], j = t[1], k = t[2];
    double acc = 0.0;
    for (int l = 0; l < n; ++l) {
      acc += at(i, l).v * jet_partial(at(j, k), l);
      acc += at(j, l).v * jet_partial(at(k, i), l);
      acc += at(k, l).v * jet_partial(at(i, j), l);
    }
    out.comp[static_cast<std::size_t>(r)] = 2.0 * acc;
  }
  return out;
}

/// Vector-field bracket [X,Y]^i = X^k d_k Y^i - Y^k d_k X^i.
template <class J>
Vecc<lower_jet_t<J>> vector_bracket(const std::vector<J>& X, const std::vector<J>& Y) {
  using R = lower_jet_t<J>;
  const int n = static_cast<int>(X.size());
  const int jd = X[0].dim();
  Vecc<R> out(static_cast<std::size_t>(n), jet_make<R>::zero(jd));
  for (int i = 0; i < n; ++i) {
    R acc = jet_make<R>::zero(jd);
    for (int k = 0; k < n; ++k)
      acc = acc + jet_lower(X[static_cast<std::size_t>(k)]) * jet_partial(Y[static_cast<std::size_t>(i)], k) -
            jet_lower(Y[static_cast<std::size_t>(k)]) * jet_partial(X[static_cast<std::size_t>(i)], k);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// (L_X pi)^{ij} = X^k d_k pi^{ij} - pi^{kj} d_k X^i - pi^{ik} d_k X^j.
template <class J>
std::vector<lower_jet_t<J>> lie_derivative_bivector(const PointFrame& fr, const std::vector<J>& X) {
  using R = lower_jet_t<J>;
  const int n = fr.dim();
  const auto& pi = fr.bivector<J>();
  auto at = [&](int i, int j) -> const J& { return pi[static_cast<std::size_t>(i) * n + j]; };
  std::vector<R> out(static_cast<std::size_t>(n) * n, jet_make<R>::zero(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      R acc = jet_make<R>::zero(n);
      for (int k = 0; k < n; ++k) {
        acc = acc + jet_lower(X[static_cast<std::size_t>(k)]) * jet_partial(at(i, j), k);
        acc = acc - jet_lower(at(k, j)) * jet_partial(X[static_cast<std::size_t>(i)], k);
        acc = acc - jet_lower(at(i, k)) * jet_partial(X[static_cast<std::size_t>(j)], k);
      }
      out[static_cast<std::size_t>(i) * n + j] = acc;
    }
  return out;
}

/// (L_X g)_{ij} = X^k d_k g_{ij} + g_{kj} d_i X^k + g_{ik} d_j X^k.
template <class J>
std::vector<lower_jet_t<J>> lie_derivative_metric(const PointFrame& fr, const std::vector<J>& X) {
  using R = lower_jet_t<J>;
  const int n = fr.dim();
  const auto& g = fr.metric<J>();
  auto at = [&](int i, int j) -> const J& { return g[static_cast<std::size_t>(i) * n + j]; };
  std::vector<R> out(static_cast<std::size_t>(n) * n, jet_make<R>::zero(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      R acc = jet_make<R>::zero(n);
      for (int k = 0; k < n; ++k) {
        acc = acc + jet_lower(X[static_cast<std::size_t>(k)]) * jet_partial(at(i, j), k);
        acc = acc + jet_lower(at(k, j)) * jet_partial(X[static_cast<std::size_t>(k)], i);
        acc = acc + jet_lower(at(i, k)) * jet_partial(X[static_cast<std::size_t>(k)], j);
      }
      out[static_cast<std::size_t>(i) * n + j] = acc;
    }
  return out;
}

/// Covariant divergence of a q-vector, contracting the derivative slot
/// with the first tensor slot:
/// (div Q)^{i2..iq} = d_k Q^{k i2..} + G^k_{kl} Q^{l i2..} + sum_m G^{im}_{kl} Q^{k i2..l..}.
inline Alt<double> divergence(const PointFrame& fr, const Alt<Jet1>& Q) {
  const int n = fr.dim();
  const int q = Q.q;
  if (q < 1) throw ModelError("divergence needs a multivector of degree >= 1");
  Alt<double> out(n, q - 1);
  for (long r = 0; r < out.size(); ++r) {
    const IndexTuple rest = comb_unrank(n, q - 1, r);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      IndexTuple full;
      full.push_back(k);
      full.insert(full.end(), rest.begin(), rest.end());
      acc += jet_partial(Q.get(full), k);
      for (int l = 0; l < n; ++l) {
        IndexTuple t = full;
        t[0] = l;
        acc += fr.christoffel(k, k, l) * Q.get(t).v;
        for (std::size_t m = 1; m < full.size(); ++m) {
          IndexTuple u = full;
          u[m] = l;
          acc += fr.christoffel(rest[m - 1], k, l) * Q.get(u).v;
        }
      }
    }
    out.comp[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

/// Divergence of a vector field (scalar case of the above).
inline double divergence_vector(const PointFrame& fr, const std::vector<Jet1>& X) {
  const int n = fr.dim();
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += jet_partial(X[static_cast<std::size_t>(k)], k);
    for (int l = 0; l < n; ++l) acc += fr.christoffel(k, k, l) * X[static_cast<std::size_t>(l)].v;
  }
  return acc;
}

/// (da)_{ij} = d_i a_j - d_j a_i for a 1-form with jet components.
inline Alt<double> exterior_derivative_oneform(const std::vector<Jet1>& a) {
  return ext_d(alt_from_vector(a));
}

/// Contraction of a multivector with the Riemannian volume.
template <class J>
Alt<J> interior_with_volume(const PointFrame& fr, const Alt<J>& Q) {
  return interior(Q, volume_form(fr.density<J>(), fr.dim()));
}

/// n-fold wedge power of the bivector.
template <class J>
Alt<J> wedge_power_pi(const PointFrame& fr, int m) {
  const int n = fr.dim();
  if (2 * m > n) throw ModelError("wedge power exceeds chart dimension");
  Alt<J> pw = alt_from_bivector(fr.bivector<J>(), n);
  Alt<J> out = pw;
  for (int i = 1; i < m; ++i) out = wedge(out, pw);
  return out;
}

/// Cartan formula L_X w = i_X dw + d i_X w for a form with jet components.
inline Alt<double> lie_derivative_form(const std::vector<Jet1>& X, const Alt<Jet1>& w) {
  const Alt<double> dw = ext_d(w);
  const Alt<double> ix_dw = interior(alt_from_vector(values_of(X)), dw);
  if (w.q == 0) return ix_dw;  // d i_X of a 0-form contributes nothing
  const Alt<double> d_ix = ext_d(interior(alt_from_vector(X), w));
  return ix_dw + d_ix;
}

}  // namespace pkt
