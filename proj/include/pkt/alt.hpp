#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <vector>

#include "pkt/jet.hpp"

namespace pkt {

// Fully antisymmetric tensors (multivectors and differential forms) in
// canonical storage: one component per strictly increasing index tuple.
//
// Conventions pinned here and relied on everywhere else:
//   * (X ^ Y)^{ij} = X^i Y^j - X^j Y^i (determinant convention, no 1/2);
//     general wedge is the shuffle sum over increasing splits.
//   * i_{X^Y} = i_Y . i_X; contraction of a q-vector Q with a p-form w is
//     (i_Q w)_J = sum over increasing I of Q^I w_{I,J}.
//   * The Riemannian volume is sqrt(det g) dx^1^...^dx^n, canonical
//     component sqrt(det g).
// These reproduce i_pi mu = df on Euclidean R^3 for
// pi = f_z dx^dy - f_y dx^dz + f_x dy^dz.

inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

using IndexTuple = std::vector<int>;

/// Rank of a strictly increasing tuple in lexicographic order.
inline long comb_rank(const IndexTuple& t, int /*n*/) {
  long r = 0;
  for (std::size_t i = 0; i < t.size(); ++i) r += binom(t[i], static_cast<int>(i) + 1);
  return r;
}

/// Inverse of comb_rank.
inline IndexTuple comb_unrank(int n, int q, long rank) {
  IndexTuple t(static_cast<std::size_t>(q));
  for (int i = q; i >= 1; --i) {
    int c = n - 1;
    while (binom(c, i) > rank) --c;
    t[static_cast<std::size_t>(i - 1)] = c;
    rank -= binom(c, i);
  }
  return t;
}

template <class S>
struct Alt {
  int n = 0;  // chart dimension
  int q = 0;  // degree
  std::vector<S> comp;  // size binom(n, q), canonical tuples in lexicographic order

  Alt() = default;
  Alt(int n_, int q_) : n(n_), q(q_), comp(static_cast<std::size_t>(binom(n_, q_)), jet_make<S>::zero(n_)) {}

  long size() const { return static_cast<long>(comp.size()); }

  const S& canonical(const IndexTuple& inc) const { return comp[static_cast<std::size_t>(comb_rank(inc, n))]; }
  S& canonical(const IndexTuple& inc) { return comp[static_cast<std::size_t>(comb_rank(inc, n))]; }

  /// Component for an arbitrary index tuple: sorts, applies the
  /// permutation sign, returns zero on repeated indices.
  S get(IndexTuple idx) const {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
      std::size_t j = i;
      while (j > 0 && idx[j - 1] > idx[j]) {
        std::swap(idx[j - 1], idx[j]);
        sign = -sign;
        --j;
      }
    }
    for (std::size_t i = 1; i < idx.size(); ++i)
      if (idx[i] == idx[i - 1]) return jet_make<S>::zero(n);
    const S& c = canonical(idx);
    if (sign > 0) return c;
    return -c;
  }
};

template <class S>
Alt<S> operator+(const Alt<S>& a, const Alt<S>& b) {
  assert(a.n == b.n && a.q == b.q);
  Alt<S> out = a;
  for (std::size_t i = 0; i < out.comp.size(); ++i) out.comp[i] = out.comp[i] + b.comp[i];
  return out;
}
template <class S>
Alt<S> operator-(const Alt<S>& a, const Alt<S>& b) {
  assert(a.n == b.n && a.q == b.q);
  Alt<S> out = a;
  for (std::size_t i = 0; i < out.comp.size(); ++i) out.comp[i] = out.comp[i] - b.comp[i];
  return out;
}
template <class S, class T>
Alt<S> operator*(const Alt<S>& a, const T& s) {
  Alt<S> out = a;
  for (auto& c : out.comp) c = c * s;
  return out;
}

/// Shuffle sign of splitting the increasing tuple K into I and K\I:
/// parity of #{(a,b) in I x (K\I) : a > b}.
inline int shuffle_sign(const IndexTuple& I, const IndexTuple& J) {
  int inv = 0;
  for (int a : I)
    for (int b : J)
      if (a > b) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

template <class S>
Alt<S> wedge(const Alt<S>& A, const Alt<S>& B) {
  assert(A.n == B.n);
  Alt<S> out(A.n, A.q + B.q);
  if (A.q + B.q > A.n) return out;  // graded zero
  const long m = out.size();
  for (long r = 0; r < m; ++r) {
    IndexTuple K = comb_unrank(out.n, out.q, r);
    S acc = jet_make<S>::zero(out.n);
    // enumerate size-A.q subsets of K by bitmask over positions
    const int kq = out.q;
    for (unsigned mask = 0; mask < (1u << kq); ++mask) {
      if (static_cast<int>(__builtin_popcount(mask)) != A.q) continue;
      IndexTuple I, J;
      for (int pos = 0; pos < kq; ++pos)
        ((mask >> pos) & 1u ? I : J).push_back(K[static_cast<std::size_t>(pos)]);
      const int sgn = shuffle_sign(I, J);
      const S term = A.canonical(I) * B.canonical(J);
      acc = (sgn > 0) ? (acc + term) : (acc - term);
    }
    out.comp[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

/// Contraction of a q-vector with a p-form, (i_Q w)_J = sum_I Q^I w_{I,J}.
/// Degrees q > p contract to the zero 0-form.
template <class S>
Alt<S> interior(const Alt<S>& Q, const Alt<S>& w) {
  assert(Q.n == w.n);
  if (Q.q > w.q) return Alt<S>(Q.n, 0);
  Alt<S> out(Q.n, w.q - Q.q);
  for (long rj = 0; rj < out.size(); ++rj) {
    IndexTuple J = comb_unrank(out.n, out.q, rj);
    S acc = jet_make<S>::zero(out.n);
    for (long ri = 0; ri < Q.size(); ++ri) {
      IndexTuple I = comb_unrank(Q.n, Q.q, ri);
      IndexTuple IJ = I;
      IJ.insert(IJ.end(), J.begin(), J.end());
      acc = acc + Q.comp[static_cast<std::size_t>(ri)] * w.get(IJ);
    }
    out.comp[static_cast<std::size_t>(rj)] = acc;
  }
  return out;
}

/// Exterior derivative from first-order jets of the components.
inline Alt<double> ext_d(const Alt<Jet1>& w) {
  Alt<double> out(w.n, w.q + 1);
  if (w.q + 1 > w.n) return out;
  for (long r = 0; r < out.size(); ++r) {
    IndexTuple K = comb_unrank(out.n, out.q, r);
    double acc = 0.0;
    for (std::size_t m = 0; m < K.size(); ++m) {
      IndexTuple rest;
      for (std::size_t i = 0; i < K.size(); ++i)
        if (i != m) rest.push_back(K[i]);
      const double term = jet_partial(w.canonical(rest), K[m]);
      acc += (m % 2 == 0) ? term : -term;
    }
    out.comp[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

template <class S>
Alt<S> volume_form(const S& density, int n) {
  Alt<S> mu(n, n);
  mu.comp[0] = density;
  return mu;
}

template <class S>
Alt<S> alt_from_vector(const std::vector<S>& x) {
  Alt<S> out(static_cast<int>(x.size()), 1);
  out.comp = x;
  return out;
}

/// Bivector matrix (full antisymmetric) -> canonical storage.
template <class S>
Alt<S> alt_from_bivector(const std::vector<S>& pi, int n) {
  Alt<S> out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.canonical({i, j}) = pi[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  return out;
}

inline double sup_norm(const Alt<double>& a) {
  double m = 0.0;
  for (double c : a.comp) m = std::max(m, std::abs(c));
  return m;
}

inline std::vector<double> values_of(const std::vector<Jet1>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].v;
  return out;
}

inline Alt<double> values_of(const Alt<Jet1>& a) {
  Alt<double> out(a.n, a.q);
  for (std::size_t i = 0; i < a.comp.size(); ++i) out.comp[i] = a.comp[i].v;
  return out;
}

}  // namespace pkt
