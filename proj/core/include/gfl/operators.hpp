#pragma once

#include "gfl/lattice.hpp"

#include <cmath>
#include <functional>

namespace gfl {

/// (grad phi)_i(x) = phi(x+e_i) - phi(x), periodic.
template <class T>
VectorField<T> gradient(const ScalarField<T>& phi) {
  const Lattice& lat = phi.lat;
  VectorField<T> F(lat);
  const int d = lat.dim();
  for (std::size_t x = 0; x < lat.n_sites(); ++x)
    for (int i = 0; i < d; ++i)
      F.at(x, i) = phi[lat.neighbor(x, i, +1)] - phi[x];
  return F;
}

/// Adjoint of gradient: (div F)(x) = sum_i F_i(x-e_i) - F_i(x).
template <class T>
ScalarField<T> divergence(const VectorField<T>& F) {
  const Lattice& lat = F.lat;
  ScalarField<T> f(lat);
  const int d = lat.dim();
  for (std::size_t x = 0; x < lat.n_sites(); ++x) {
    T s{};
    for (int i = 0; i < d; ++i) s += F.at(lat.neighbor(x, i, -1), i) - F.at(x, i);
    f[x] = s;
  }
  return f;
}

/// -Delta = div grad (negative discrete Laplacian, positive semidefinite).
template <class T>
ScalarField<T> laplacian_apply(const ScalarField<T>& phi) {
  return divergence(gradient(phi));
}

/// Sitewise Euclidean magnitude |F(x)|.
template <class T>
double site_abs(const VectorField<T>& F, std::size_t x) {
  double s = 0;
  const int d = F.lat.dim();
  for (int i = 0; i < d; ++i) s += std::norm(cplx(F.at(x, i)));
  return std::sqrt(s);
}

/// (sum_x |F(x)|^p)^{1/p}, |.| the Euclidean norm over the d components.
template <class T>
double lp_norm(const VectorField<T>& F, double p) {
  double s = 0;
  for (std::size_t x = 0; x < F.lat.n_sites(); ++x) s += std::pow(site_abs(F, x), p);
  return std::pow(s, 1.0 / p);
}

/// (sum_x |F(x)|^p w(x))^{1/p} with a per-site weight.
template <class T>
double weighted_lp_norm(const VectorField<T>& F, double p,
                        const std::function<double(std::size_t)>& w) {
  double s = 0;
  for (std::size_t x = 0; x < F.lat.n_sites(); ++x) s += std::pow(site_abs(F, x), p) * w(x);
  return std::pow(s, 1.0 / p);
}

template <class T>
double max_site_imag(const VectorField<T>& F) {
  double m = 0;
  for (const auto& v : F.v) m = std::max(m, std::abs(imag_part(v)));
  return m;
}

}  // namespace gfl
