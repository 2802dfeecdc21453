#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pkt/chart.hpp"
#include "pkt/errors.hpp"
#include "pkt/jet.hpp"

namespace pkt {

// Small dense matrices of jets or doubles, row-major, on vectors.

/// Gauss-Jordan inverse with partial pivoting on |value|. Works for any
/// scalar with field arithmetic (double, Jet1, Jet2), so inverting a
/// matrix of jets yields exact derivatives of the inverse.
template <class S>
std::vector<S> mat_inverse(int n, const std::vector<S>& m_in, int jet_dim) {
  std::vector<S> a = m_in;
  std::vector<S> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), jet_make<S>::zero(jet_dim));
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = jet_make<S>::constant(1.0, jet_dim);
  auto at = [n](std::vector<S>& v, int i, int j) -> S& { return v[static_cast<std::size_t>(i) * n + j]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(jet_value(at(a, r, col))) > std::abs(jet_value(at(a, piv, col)))) piv = r;
    if (jet_value(at(a, piv, col)) == 0.0) throw NumericError("singular matrix in inverse");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(at(a, piv, j), at(a, col, j));
        std::swap(at(inv, piv, j), at(inv, col, j));
      }
    const S d = at(a, col, col);
    for (int j = 0; j < n; ++j) {
      at(a, col, j) = at(a, col, j) / d;
      at(inv, col, j) = at(inv, col, j) / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = at(a, r, col);
      if (jet_value(f) == 0.0 && std::is_same_v<S, double>) continue;
      for (int j = 0; j < n; ++j) {
        at(a, r, j) = at(a, r, j) - f * at(a, col, j);
        at(inv, r, j) = at(inv, r, j) - f * at(inv, col, j);
      }
    }
  }
  return inv;
}

/// Determinant by LU elimination with partial pivoting.
template <class S>
S mat_det(int n, const std::vector<S>& m_in, int jet_dim) {
  std::vector<S> a = m_in;
  auto at = [n](std::vector<S>& v, int i, int j) -> S& { return v[static_cast<std::size_t>(i) * n + j]; };
  S det = jet_make<S>::constant(1.0, jet_dim);
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(jet_value(at(a, r, col))) > std::abs(jet_value(at(a, piv, col)))) piv = r;
    if (jet_value(at(a, piv, col)) == 0.0) return jet_make<S>::zero(jet_dim);
    if (piv != col) {
      sign = -sign;
      for (int j = 0; j < n; ++j) std::swap(at(a, piv, j), at(a, col, j));
    }
    det = det * at(a, col, col);
    for (int r = col + 1; r < n; ++r) {
      const S f = at(a, r, col) / at(a, col, col);
      for (int j = col; j < n; ++j) at(a, r, j) = at(a, r, j) - f * at(a, col, j);
    }
  }
  return sign > 0 ? det : -det;
}

/// Cholesky positive-definiteness test (no factor kept).
inline bool is_positive_definite(int n, const std::vector<double>& m) {
  std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [n](const std::vector<double>& v, int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; };
  auto atL = [n, &L](int i, int j) -> double& { return L[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = at(m, i, j);
      for (int k = 0; k < j; ++k) s -= atL(i, k) * atL(j, k);
      if (i == j) {
        if (!(s > 0.0)) return false;
        atL(i, j) = std::sqrt(s);
      } else {
        atL(i, j) = s / atL(j, j);
      }
    }
  }
  return true;
}

/// Everything evaluated at one point: order-2 jets of the metric and the
/// bivector, the jet of the inverse metric and of the volume density, plus
/// order-1 truncations and plain-double caches. Construction validates
/// positive definiteness and non-degeneracy of g.
class PointFrame {
 public:
  PointFrame(const ChartModel& model, std::vector<double> point) : model_(&model), p_(std::move(point)), n_(model.dim) {
    if (static_cast<int>(p_.size()) != n_) throw ModelError("point dimension mismatch");
    const std::span<const double> ps(p_);
    g2_.reserve(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) g2_.push_back(model.metric(i, j).eval_jet2(ps));
    pi2_.assign(static_cast<std::size_t>(n_) * n_, Jet2(n_));
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        Jet2 e = model.pi_entry(i, j).eval_jet2(ps);
        pi2_[static_cast<std::size_t>(i) * n_ + j] = e;
        pi2_[static_cast<std::size_t>(j) * n_ + i] = -e;
      }

    g0_.resize(g2_.size());
    for (std::size_t k = 0; k < g2_.size(); ++k) g0_[k] = g2_[k].v;
    validate_metric();

    ginv2_ = mat_inverse(n_, g2_, n_);
    const Jet2 det = mat_det(n_, g2_, n_);
    dens2_ = sqrt(det);

    ginv0_.resize(ginv2_.size());
    for (std::size_t k = 0; k < ginv2_.size(); ++k) ginv0_[k] = ginv2_[k].v;
    pi0_.resize(pi2_.size());
    for (std::size_t k = 0; k < pi2_.size(); ++k) pi0_[k] = pi2_[k].v;

    double gscale = 0.0;
    for (double v : g0_) gscale = std::max(gscale, std::abs(v));
    if (inverse_residual_raw() > 1e-12 * gscale)
      throw NumericError("metric inversion lost precision at " + point_str());

    g1_ = lower_all(g2_);
    ginv1_ = lower_all(ginv2_);
    pi1_ = lower_all(pi2_);
    dens1_ = jet_lower(dens2_);
    dens0_ = dens2_.v;

    christoffels_ = compute_christoffels();
  }

  int dim() const { return n_; }
  const std::vector<double>& point() const { return p_; }
  const ChartModel& model() const { return *model_; }

  // order-tagged access to frame data (Jet2, Jet1 or plain double)
  template <class J>
  const std::vector<J>& metric() const {
    if constexpr (std::is_same_v<J, Jet2>) return g2_;
    else if constexpr (std::is_same_v<J, Jet1>) return g1_;
    else return g0_;
  }
  template <class J>
  const std::vector<J>& metric_inv() const {
    if constexpr (std::is_same_v<J, Jet2>) return ginv2_;
    else if constexpr (std::is_same_v<J, Jet1>) return ginv1_;
    else return ginv0_;
  }
  template <class J>
  const std::vector<J>& bivector() const {
    if constexpr (std::is_same_v<J, Jet2>) return pi2_;
    else if constexpr (std::is_same_v<J, Jet1>) return pi1_;
    else return pi0_;
  }
  template <class J>
  const J& density() const {
    if constexpr (std::is_same_v<J, Jet2>) return dens2_;
    else if constexpr (std::is_same_v<J, Jet1>) return dens1_;
    else return dens0_;
  }

  const std::vector<double>& metric_values() const { return g0_; }
  const std::vector<double>& metric_inv_values() const { return ginv0_; }
  const std::vector<double>& bivector_values() const { return pi0_; }
  double density_value() const { return dens2_.v; }

  /// Levi-Civita symbols Gamma^k_{ij}, indexed [k][i][j] flattened.
  const std::vector<double>& christoffels() const { return christoffels_; }
  double christoffel(int k, int i, int j) const {
    return christoffels_[(static_cast<std::size_t>(k) * n_ + i) * n_ + j];
  }

  // named fields, evaluated at this point
  Jet2 scalar_jet(const std::string& name) const {
    auto it = model_->scalars.find(name);
    if (it == model_->scalars.end()) throw ModelError("scalar field '" + name + "' is not declared");
    return it->second.eval_jet2(p_);
  }
  std::vector<Jet2> vector_jet(const std::string& name) const {
    auto it = model_->vectors.find(name);
    if (it == model_->vectors.end()) throw ModelError("vector field '" + name + "' is not declared");
    return eval_components(it->second);
  }
  std::vector<Jet2> oneform_jet(const std::string& name) const {
    auto it = model_->oneforms.find(name);
    if (it == model_->oneforms.end()) throw ModelError("1-form field '" + name + "' is not declared");
    return eval_components(it->second);
  }
  std::vector<Jet2> eval_components(const std::vector<ScalarExpr>& comps) const {
    std::vector<Jet2> out;
    out.reserve(comps.size());
    for (const auto& e : comps) out.push_back(e.eval_jet2(p_));
    return out;
  }

 private:
  void validate_metric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (g0_[static_cast<std::size_t>(i) * n_ + j] != g0_[static_cast<std::size_t>(j) * n_ + i])
          throw NumericError("metric matrix is not symmetric at " + point_str());
    if (!is_positive_definite(n_, g0_)) throw NumericError("metric is not positive definite at " + point_str());
    double scale = 0.0;
    for (int i = 0; i < n_; ++i) scale = std::max(scale, std::abs(g0_[static_cast<std::size_t>(i) * n_ + i]));
    const double det = mat_det(n_, g0_, n_);
    double scale_n = 1.0;
    for (int i = 0; i < n_; ++i) scale_n *= scale;
    if (det <= 1e-12 * scale_n) throw NumericError("metric is numerically degenerate at " + point_str());
  }

  std::vector<double> compute_christoffels() const {
    std::vector<double> out(static_cast<std::size_t>(n_) * n_ * n_, 0.0);
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          double s = 0.0;
          for (int l = 0; l < n_; ++l) {
            const Jet1& gjl = g1_[static_cast<std::size_t>(j) * n_ + l];
            const Jet1& gil = g1_[static_cast<std::size_t>(i) * n_ + l];
            const Jet1& gij = g1_[static_cast<std::size_t>(i) * n_ + j];
            s += ginv0_[static_cast<std::size_t>(k) * n_ + l] * (jet_partial(gjl, i) + jet_partial(gil, j) - jet_partial(gij, l));
          }
          out[(static_cast<std::size_t>(k) * n_ + i) * n_ + j] = 0.5 * s;
        }
    return out;
  }

  static std::vector<Jet1> lower_all(const std::vector<Jet2>& v) {
    std::vector<Jet1> out;
    out.reserve(v.size());
    for (const auto& j : v) out.push_back(jet_lower(j));
    return out;
  }

  std::string point_str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p_.size(); ++i) os << (i ? ", " : "") << p_[i];
    os << ")";
    return os.str();
  }

  double inverse_residual_raw() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int k = 0; k < n_; ++k)
          s += g0_[static_cast<std::size_t>(i) * n_ + k] * ginv0_[static_cast<std::size_t>(k) * n_ + j];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    return worst;
  }

  const ChartModel* model_;
  std::vector<double> p_;
  int n_;
  std::vector<Jet2> g2_, ginv2_, pi2_;
  Jet2 dens2_;
  std::vector<Jet1> g1_, ginv1_, pi1_;
  Jet1 dens1_;
  double dens0_ = 0.0;
  std::vector<double> g0_, ginv0_, pi0_;
  std::vector<double> christoffels_;
};

/// Relative residual of g * g^{-1} - I (frame sanity invariant).
inline double inverse_residual(const PointFrame& fr) {
  const int n = fr.dim();
  const auto& g = fr.metric_values();
  const auto& gi = fr.metric_inv_values();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += g[static_cast<std::size_t>(i) * n + k] * gi[static_cast<std::size_t>(k) * n + j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace pkt
