#pragma once

#include "gfl/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfl {

struct ConvexityConstants {
  double lambda_low;   // largest lambda with V'' >= lambda I
  double Lambda_high;  // smallest Lambda with V'' <= Lambda I
};

struct StripConstants {
  double eta;
  double delta_eta;  // strip half-width; STRIP_INFINITE when V is entire quadratic
  double M;          // sup ||V'''|| on R^d
  double M_eta;      // sup ||V'''|| on the strip
};

inline constexpr double STRIP_INFINITE = 1e30;

/// Single-bond potential V : R^d -> R, analytically continued to the strip
/// |Im omega_j| < delta(eta). Immutable value object; V(0) = 0 by
/// construction (constant subtracted), V even.
class Potential {
public:
  enum class Kind { gaussian, dipole };

  /// V(w) = w^T A w / 2 with A symmetric, lambda I <= A.
  static Potential gaussian(int d, std::vector<double> A_rowmajor);
  /// V(w) = |w|^2/2 - a sum_j cos(w_j) + a d, |a| < 1.
  static Potential dipole(int d, double a);

  Kind kind() const { return kind_; }
  int dim() const { return d_; }
  double coupling() const { return a_; }
  const std::vector<double>& matrix() const { return A_; }

  ConvexityConstants convexity_constants() const { return cc_; }
  double lambda() const { return cc_.lambda_low; }
  double Lambda() const { return cc_.Lambda_high; }
  /// Contraction constant of the drift nonlinearity split at the identity:
  /// sup ||I - V''|| = 1 - lambda_c.
  double lambda_c() const { return 1.0 - std::max(cc_.Lambda_high - 1.0, 1.0 - cc_.lambda_low); }

  StripConstants strip_constants(double eta) const;

  // ---- sitewise evaluation (w has d components) -------------------------

  template <class T>
  T value(const T* w) const {
    if (kind_ == Kind::gaussian) {
      T s{};
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) s += w[i] * A_[idx(i, j)] * w[j];
      return s * 0.5;
    }
    T s{};
    for (int j = 0; j < d_; ++j) s += w[j] * w[j] * 0.5 - a_ * std::cos(w[j]);
    return s + a_ * static_cast<double>(d_);
  }

  template <class T>
  void grad(const T* w, T* out) const {
    if (kind_ == Kind::gaussian) {
      for (int i = 0; i < d_; ++i) {
        T s{};
        for (int j = 0; j < d_; ++j) s += A_[idx(i, j)] * w[j];
        out[i] = s;
      }
      return;
    }
    for (int j = 0; j < d_; ++j) out[j] = w[j] + a_ * std::sin(w[j]);
  }

  /// V''(w) as a dense row-major d x d matrix.
  template <class T>
  void hessian(const T* w, T* out) const {
    if (kind_ == Kind::gaussian) {
      for (int i = 0; i < d_ * d_; ++i) out[i] = A_[static_cast<std::size_t>(i)];
      return;
    }
    for (int i = 0; i < d_ * d_; ++i) out[i] = T{};
    for (int j = 0; j < d_; ++j) out[idx(j, j)] = 1.0 + a_ * std::cos(w[j]);
  }

  /// V'''(w)[xi1, xi2, xi3].
  template <class T>
  T third(const T* w, const T* xi1, const T* xi2, const T* xi3) const {
    if (kind_ == Kind::gaussian) return T{};
    T s{};
    for (int j = 0; j < d_; ++j) s += -a_ * std::sin(w[j]) * xi1[j] * xi2[j] * xi3[j];
    return s;
  }

  // ---- field-level evaluation --------------------------------------------

  /// sum_x V(w(x)).
  template <class T>
  T action_sum(const VectorField<T>& w) const {
    check_dim(w);
    T s{};
    for (std::size_t x = 0; x < w.lat.n_sites(); ++x) s += value(&w.v[x * static_cast<std::size_t>(d_)]);
    return s;
  }

  /// Sitewise V'(w(x)).
  template <class T>
  VectorField<T> dV(const VectorField<T>& w) const {
    check_dim(w);
    VectorField<T> out(w.lat);
    for (std::size_t x = 0; x < w.lat.n_sites(); ++x)
      grad(&w.v[x * static_cast<std::size_t>(d_)], &out.v[x * static_cast<std::size_t>(d_)]);
    return out;
  }

  /// Sitewise (I - V''(w(x))) f(x); the contraction kernel of the
  /// variation fixed-point equations. ||result|| <= (1 - lambda_c)||f||.
  template <class T>
  VectorField<T> b_apply(const VectorField<T>& w, const VectorField<T>& f) const {
    check_dim(w);
    VectorField<T> out(f.lat);
    const std::size_t dd = static_cast<std::size_t>(d_);
    if (kind_ == Kind::gaussian) {
      for (std::size_t x = 0; x < w.lat.n_sites(); ++x)
        for (int i = 0; i < d_; ++i) {
          T s = f.v[x * dd + static_cast<std::size_t>(i)];
          for (int j = 0; j < d_; ++j)
            s -= A_[idx(i, j)] * f.v[x * dd + static_cast<std::size_t>(j)];
          out.v[x * dd + static_cast<std::size_t>(i)] = s;
        }
      return out;
    }
    for (std::size_t x = 0; x < w.lat.n_sites(); ++x)
      for (int j = 0; j < d_; ++j) {
        const std::size_t i = x * dd + static_cast<std::size_t>(j);
        out.v[i] = -a_ * std::cos(w.v[i]) * f.v[i];
      }
    return out;
  }

  /// Component i at site x: V'''(w(x))[e_i, u(x), v(x)].
  template <class T>
  VectorField<T> d3_contract(const VectorField<T>& w, const VectorField<T>& u,
                             const VectorField<T>& v) const {
    check_dim(w);
    VectorField<T> out(w.lat);
    if (kind_ == Kind::gaussian) return out;
    const std::size_t dd = static_cast<std::size_t>(d_);
    for (std::size_t x = 0; x < w.lat.n_sites(); ++x)
      for (int j = 0; j < d_; ++j) {
        const std::size_t i = x * dd + static_cast<std::size_t>(j);
        out.v[i] = -a_ * std::sin(w.v[i]) * u.v[i] * v.v[i];
      }
    return out;
  }

private:
  Potential(Kind k, int d) : kind_(k), d_(d) {}
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i * d_ + j);
  }
  template <class T>
  void check_dim(const VectorField<T>& w) const {
    if (w.lat.dim() != d_) throw std::invalid_argument("field dimension != potential dimension");
  }

  Kind kind_;
  int d_;
  double a_ = 0.0;
  std::vector<double> A_;
  ConvexityConstants cc_{1.0, 1.0};
};

}  // namespace gfl
