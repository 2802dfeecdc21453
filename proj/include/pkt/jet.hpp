#pragma once

#include <cassert>
#include <cmath>
#include <type_traits>
#include <vector>

#include "pkt/errors.hpp"

namespace pkt {

// Order-1 and order-2 jets of a scalar at a point: value + gradient
// (+ Hessian). Arithmetic propagates derivatives exactly (product,
// quotient and chain rules), so derived quantities carry true
// derivatives up to floating-point rounding, never finite differences.
//
// Hessians are kept exactly symmetric: every rule below writes h[i][j]
// and h[j][i] from the same commuted products.

/// Value + gradient.
struct Jet1 {
  double v = 0.0;
  std::vector<double> g;

  Jet1() = default;
  explicit Jet1(int n) : v(0.0), g(static_cast<std::size_t>(n), 0.0) {}
  Jet1(double value, int n) : v(value), g(static_cast<std::size_t>(n), 0.0) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet1 constant(double c, int n) { return Jet1(c, n); }
  static Jet1 variable(double x, int k, int n) {
    Jet1 j(x, n);
    j.g[static_cast<std::size_t>(k)] = 1.0;
    return j;
  }
};

/// Value + gradient + symmetric Hessian (row-major n*n).
struct Jet2 {
  double v = 0.0;
  std::vector<double> g;
  std::vector<double> h;

  Jet2() = default;
  explicit Jet2(int n)
      : v(0.0),
        g(static_cast<std::size_t>(n), 0.0),
        h(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}
  Jet2(double value, int n) : Jet2(n) { v = value; }

  int dim() const { return static_cast<int>(g.size()); }
  double hess(int i, int j) const { return h[static_cast<std::size_t>(i) * g.size() + static_cast<std::size_t>(j)]; }
  double& hess(int i, int j) { return h[static_cast<std::size_t>(i) * g.size() + static_cast<std::size_t>(j)]; }

  static Jet2 constant(double c, int n) { return Jet2(c, n); }
  static Jet2 variable(double x, int k, int n) {
    Jet2 j(x, n);
    j.g[static_cast<std::size_t>(k)] = 1.0;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Uniform hooks used by generic tensor assemblies. An assembly written at
// working order S consumes raw data of one order higher through
// jet_partial(); lower_jet_t maps the raw order to the working order.
// ---------------------------------------------------------------------------

template <class J>
struct lower_jet;
template <>
struct lower_jet<Jet2> {
  using type = Jet1;
};
template <>
struct lower_jet<Jet1> {
  using type = double;
};
template <class J>
using lower_jet_t = typename lower_jet<J>::type;

inline double jet_value(double x) { return x; }
inline double jet_value(const Jet1& j) { return j.v; }
inline double jet_value(const Jet2& j) { return j.v; }

/// d/dx_k as an object one order lower.
inline double jet_partial(const Jet1& j, int k) { return j.g[static_cast<std::size_t>(k)]; }
inline Jet1 jet_partial(const Jet2& j, int k) {
  Jet1 out(j.dim());
  out.v = j.g[static_cast<std::size_t>(k)];
  for (int i = 0; i < j.dim(); ++i) out.g[static_cast<std::size_t>(i)] = j.hess(k, i);
  return out;
}

/// Truncation to one order lower (same value, derivatives dropped).
inline double jet_lower(const Jet1& j) { return j.v; }
inline Jet1 jet_lower(const Jet2& j) {
  Jet1 out;
  out.v = j.v;
  out.g = j.g;
  return out;
}
inline double jet_lower(double x) { return x; }

template <class S>
struct jet_make;
template <>
struct jet_make<double> {
  static double zero(int) { return 0.0; }
  static double constant(double c, int) { return c; }
};
template <>
struct jet_make<Jet1> {
  static Jet1 zero(int n) { return Jet1(n); }
  static Jet1 constant(double c, int n) { return Jet1(c, n); }
};
template <>
struct jet_make<Jet2> {
  static Jet2 zero(int n) { return Jet2(n); }
  static Jet2 constant(double c, int n) { return Jet2(c, n); }
};

// ---------------------------------------------------------------------------
// Jet1 arithmetic
// ---------------------------------------------------------------------------

inline Jet1 operator+(const Jet1& a, const Jet1& b) {
  assert(a.dim() == b.dim());
  Jet1 out = a;
  out.v += b.v;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] += b.g[i];
  return out;
}
inline Jet1 operator-(const Jet1& a, const Jet1& b) {
  assert(a.dim() == b.dim());
  Jet1 out = a;
  out.v -= b.v;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] -= b.g[i];
  return out;
}
inline Jet1 operator-(const Jet1& a) {
  Jet1 out = a;
  out.v = -out.v;
  for (auto& x : out.g) x = -x;
  return out;
}
inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  assert(a.dim() == b.dim());
  Jet1 out(a.dim());
  out.v = a.v * b.v;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] = a.g[i] * b.v + a.v * b.g[i];
  return out;
}
inline Jet1 operator*(const Jet1& a, double s) {
  Jet1 out = a;
  out.v *= s;
  for (auto& x : out.g) x *= s;
  return out;
}
inline Jet1 operator*(double s, const Jet1& a) { return a * s; }
inline Jet1 operator+(const Jet1& a, double s) {
  Jet1 out = a;
  out.v += s;
  return out;
}
inline Jet1 operator+(double s, const Jet1& a) { return a + s; }
inline Jet1 operator-(const Jet1& a, double s) { return a + (-s); }
inline Jet1 operator-(double s, const Jet1& a) { return (-a) + s; }

inline Jet1 jet_inv(const Jet1& b) {
  if (b.v == 0.0) throw EvalError("division by zero in jet arithmetic");
  Jet1 out(b.dim());
  const double iv = 1.0 / b.v;
  out.v = iv;
  const double m = -iv * iv;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] = m * b.g[i];
  return out;
}
/// Quotient rule, so the value is exactly a.v / b.v.
inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  if (b.v == 0.0) throw EvalError("division by zero in jet arithmetic");
  assert(a.dim() == b.dim());
  Jet1 out(a.dim());
  out.v = a.v / b.v;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] = (a.g[i] - out.v * b.g[i]) / b.v;
  return out;
}
inline Jet1 operator/(const Jet1& a, double s) { return a * (1.0 / s); }
inline Jet1 operator/(double s, const Jet1& b) { return jet_inv(b) * s; }

/// Chain rule for a smooth u: value u(f), derivative u'(f).
inline Jet1 jet_compose(const Jet1& f, double u, double du) {
  Jet1 out(f.dim());
  out.v = u;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] = du * f.g[i];
  return out;
}

inline Jet1 sin(const Jet1& f) { return jet_compose(f, std::sin(f.v), std::cos(f.v)); }
inline Jet1 cos(const Jet1& f) { return jet_compose(f, std::cos(f.v), -std::sin(f.v)); }
inline Jet1 exp(const Jet1& f) {
  const double e = std::exp(f.v);
  return jet_compose(f, e, e);
}
inline Jet1 log(const Jet1& f) {
  if (!(f.v > 0.0)) throw EvalError("log of non-positive value in jet arithmetic");
  return jet_compose(f, std::log(f.v), 1.0 / f.v);
}
inline Jet1 sqrt(const Jet1& f) {
  if (!(f.v > 0.0)) throw EvalError("sqrt of non-positive value in jet arithmetic");
  const double s = std::sqrt(f.v);
  return jet_compose(f, s, 0.5 / s);
}

// ---------------------------------------------------------------------------
// Jet2 arithmetic
// ---------------------------------------------------------------------------

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  assert(a.dim() == b.dim());
  Jet2 out = a;
  out.v += b.v;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] += b.g[i];
  for (std::size_t i = 0; i < out.h.size(); ++i) out.h[i] += b.h[i];
  return out;
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  assert(a.dim() == b.dim());
  Jet2 out = a;
  out.v -= b.v;
  for (std::size_t i = 0; i < out.g.size(); ++i) out.g[i] -= b.g[i];
  for (std::size_t i = 0; i < out.h.size(); ++i) out.h[i] -= b.h[i];
  return out;
}
inline Jet2 operator-(const Jet2& a) {
  Jet2 out = a;
  out.v = -out.v;
  for (auto& x : out.g) x = -x;
  for (auto& x : out.h) x = -x;
  return out;
}
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  assert(a.dim() == b.dim());
  const int n = a.dim();
  Jet2 out(n);
  out.v = a.v * b.v;
  for (int i = 0; i < n; ++i) out.g[static_cast<std::size_t>(i)] = a.g[static_cast<std::size_t>(i)] * b.v + a.v * b.g[static_cast<std::size_t>(i)];
  // the cross term is grouped symmetrically so hess(i,j) == hess(j,i)
  // holds bitwise, not just up to rounding
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double cross = a.g[static_cast<std::size_t>(i)] * b.g[static_cast<std::size_t>(j)] +
                           a.g[static_cast<std::size_t>(j)] * b.g[static_cast<std::size_t>(i)];
      out.hess(i, j) = a.hess(i, j) * b.v + a.v * b.hess(i, j) + cross;
    }
  return out;
}
inline Jet2 operator*(const Jet2& a, double s) {
  Jet2 out = a;
  out.v *= s;
  for (auto& x : out.g) x *= s;
  for (auto& x : out.h) x *= s;
  return out;
}
inline Jet2 operator*(double s, const Jet2& a) { return a * s; }
inline Jet2 operator+(const Jet2& a, double s) {
  Jet2 out = a;
  out.v += s;
  return out;
}
inline Jet2 operator+(double s, const Jet2& a) { return a + s; }
inline Jet2 operator-(const Jet2& a, double s) { return a + (-s); }
inline Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }

/// Chain rule with second derivatives: u(f.v), u'(f.v), u''(f.v).
/// Products are grouped so the Hessian stays bitwise symmetric.
inline Jet2 jet_compose(const Jet2& f, double u, double du, double ddu) {
  const int n = f.dim();
  Jet2 out(n);
  out.v = u;
  for (int i = 0; i < n; ++i) out.g[static_cast<std::size_t>(i)] = du * f.g[static_cast<std::size_t>(i)];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.hess(i, j) = ddu * (f.g[static_cast<std::size_t>(i)] * f.g[static_cast<std::size_t>(j)]) + du * f.hess(i, j);
  return out;
}

inline Jet2 jet_inv(const Jet2& b) {
  if (b.v == 0.0) throw EvalError("division by zero in jet arithmetic");
  const double iv = 1.0 / b.v;
  return jet_compose(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}
/// Quotient rule derived from a = q * b, so the value is exactly a.v / b.v.
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.v == 0.0) throw EvalError("division by zero in jet arithmetic");
  assert(a.dim() == b.dim());
  const int n = a.dim();
  Jet2 out(n);
  out.v = a.v / b.v;
  for (int i = 0; i < n; ++i)
    out.g[static_cast<std::size_t>(i)] = (a.g[static_cast<std::size_t>(i)] - out.v * b.g[static_cast<std::size_t>(i)]) / b.v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double cross = out.g[static_cast<std::size_t>(i)] * b.g[static_cast<std::size_t>(j)] +
                           out.g[static_cast<std::size_t>(j)] * b.g[static_cast<std::size_t>(i)];
      out.hess(i, j) = (a.hess(i, j) - out.v * b.hess(i, j) - cross) / b.v;
    }
  return out;
}
inline Jet2 operator/(const Jet2& a, double s) { return a * (1.0 / s); }
inline Jet2 operator/(double s, const Jet2& b) { return jet_inv(b) * s; }

inline Jet2 sin(const Jet2& f) {
  const double s = std::sin(f.v), c = std::cos(f.v);
  return jet_compose(f, s, c, -s);
}
inline Jet2 cos(const Jet2& f) {
  const double s = std::sin(f.v), c = std::cos(f.v);
  return jet_compose(f, c, -s, -c);
}
inline Jet2 exp(const Jet2& f) {
  const double e = std::exp(f.v);
  return jet_compose(f, e, e, e);
}
inline Jet2 log(const Jet2& f) {
  if (!(f.v > 0.0)) throw EvalError("log of non-positive value in jet arithmetic");
  const double iv = 1.0 / f.v;
  return jet_compose(f, std::log(f.v), iv, -iv * iv);
}
inline Jet2 sqrt(const Jet2& f) {
  if (!(f.v > 0.0)) throw EvalError("sqrt of non-positive value in jet arithmetic");
  const double s = std::sqrt(f.v);
  return jet_compose(f, s, 0.5 / s, -0.25 / (s * f.v));
}

// ---------------------------------------------------------------------------
// Powers. Integer exponents are valid for any base (negative exponents
// require a non-zero base); real exponents require a positive base.
// ---------------------------------------------------------------------------

inline double ipow_value(double x, long long k) {
  if (k < 0) return 1.0 / ipow_value(x, -k);
  double acc = 1.0, base = x;
  long long e = k;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

template <class J>
inline J jet_ipow(const J& f, long long k) {
  if (k == 0) return jet_make<J>::constant(1.0, f.dim());
  if (k < 0) {
    if (f.v == 0.0) throw EvalError("zero base with negative integer exponent");
    return jet_inv(jet_ipow(f, -k));
  }
  const double u = ipow_value(f.v, k);
  const double du = static_cast<double>(k) * (k >= 1 ? ipow_value(f.v, k - 1) : 0.0);
  if constexpr (std::is_same_v<J, Jet1>) {
    return jet_compose(f, u, du);
  } else {
    const double ddu = (k >= 2) ? static_cast<double>(k) * static_cast<double>(k - 1) * ipow_value(f.v, k - 2) : 0.0;
    return jet_compose(f, u, du, ddu);
  }
}

template <class J>
inline J jet_rpow(const J& f, double s) {
  if (!(f.v > 0.0)) throw EvalError("non-integer power of non-positive base");
  const double u = std::pow(f.v, s);
  const double du = s * std::pow(f.v, s - 1.0);
  if constexpr (std::is_same_v<J, Jet1>) {
    return jet_compose(f, u, du);
  } else {
    const double ddu = s * (s - 1.0) * std::pow(f.v, s - 2.0);
    return jet_compose(f, u, du, ddu);
  }
}

inline Jet1 abs(const Jet1& f) {
  if (f.v == 0.0) throw EvalError("abs evaluated at zero (derivative undefined)");
  return f.v > 0.0 ? f : -f;
}
inline Jet2 abs(const Jet2& f) {
  if (f.v == 0.0) throw EvalError("abs evaluated at zero (derivative undefined)");
  return f.v > 0.0 ? f : -f;
}

}  // namespace pkt
