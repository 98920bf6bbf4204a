#pragma once

#include "gfl/lattice.hpp"
#include "gfl/operators.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace gfl {

/// Fourier diagonalization of the torus operators. Immutable after
/// construction; shared per (d, L) through spectral().
///
/// Conventions: frequencies k in {0..L-1}^d, row-major like sites;
/// sigma(k) = sum_i 4 sin^2(pi k_i / L) is the symbol of -Delta;
/// g_i(k) = exp(2 pi i k_i / L) - 1 is the symbol of the forward difference.
class SpectralCache {
public:
  explicit SpectralCache(const Lattice& lat);
  ~SpectralCache();
  SpectralCache(const SpectralCache&) = delete;
  SpectralCache& operator=(const SpectralCache&) = delete;

  const Lattice& lattice() const { return lat_; }
  const std::vector<double>& symbols() const { return sym_; }
  /// Forward-difference symbol for coordinate value c in 0..L-1.
  cplx g(int c) const { return g_[static_cast<std::size_t>(c)]; }

  void forward(cplx* data) const;
  void backward(cplx* data) const;  // includes the 1/n_sites normalization

private:
  Lattice lat_;
  std::vector<double> sym_;
  std::vector<cplx> g_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Shared per-lattice cache (thread-safe registry).
const SpectralCache& spectral(const Lattice& lat);

namespace detail {

template <class T>
std::vector<cplx> to_cplx(const std::vector<T>& v) {
  return std::vector<cplx>(v.begin(), v.end());
}

inline void from_cplx(const std::vector<cplx>& c, std::vector<double>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c[i].real();
}
inline void from_cplx(const std::vector<cplx>& c, std::vector<cplx>& out) { out = c; }

}  // namespace detail

/// u with (-Delta + m2) u = f, computed spectrally.
template <class T>
ScalarField<T> helmholtz_solve(const ScalarField<T>& f, double m2) {
  if (!(m2 > 0)) throw std::domain_error("helmholtz_solve requires m2 > 0");
  const SpectralCache& sc = spectral(f.lat);
  std::vector<cplx> w = detail::to_cplx(f.v);
  sc.forward(w.data());
  const auto& sym = sc.symbols();
  for (std::size_t k = 0; k < w.size(); ++k) w[k] /= (sym[k] + m2);
  sc.backward(w.data());
  ScalarField<T> u(f.lat);
  detail::from_cplx(w, u.v);
  return u;
}

/// Multiplies each Fourier coefficient by (sigma(k)+m2)^{-1/2}.
template <class T>
ScalarField<T> sqrt_inv_apply(const ScalarField<T>& f, double m2) {
  if (!(m2 > 0)) throw std::domain_error("sqrt_inv_apply requires m2 > 0");
  const SpectralCache& sc = spectral(f.lat);
  std::vector<cplx> w = detail::to_cplx(f.v);
  sc.forward(w.data());
  const auto& sym = sc.symbols();
  for (std::size_t k = 0; k < w.size(); ++k) w[k] /= std::sqrt(sym[k] + m2);
  sc.backward(w.data());
  ScalarField<T> u(f.lat);
  detail::from_cplx(w, u.v);
  return u;
}

/// grad (div A grad + m2)^{-1} div for a constant symmetric d x d matrix A
/// (row-major). The zero mode of div F vanishes, so m2 = 0 is allowed.
template <class T>
VectorField<T> grad_solve_div(const VectorField<T>& F, const std::vector<double>& A,
                              double m2) {
  const Lattice& lat = F.lat;
  const int d = lat.dim();
  if (A.size() != static_cast<std::size_t>(d * d))
    throw std::invalid_argument("grad_solve_div: A must be d x d row-major");
  if (m2 < 0) throw std::domain_error("grad_solve_div requires m2 >= 0");
  const SpectralCache& sc = spectral(lat);
  const std::size_t n = lat.n_sites();

  std::vector<std::vector<cplx>> comp(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    comp[i].resize(n);
    for (std::size_t x = 0; x < n; ++x) comp[i][x] = cplx(F.at(x, i));
    sc.forward(comp[i].data());
  }

  // per mode: t = sum_i conj(g_i) Fhat_i; u = t / (gbar^T A g + m2); out_i = g_i u
  std::vector<cplx> gk(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < n; ++k) {
    auto kc = lat.coords(k);
    double s2 = 0;
    for (int i = 0; i < d; ++i) {
      gk[i] = sc.g(kc[i]);
      s2 += std::norm(gk[i]);
    }
    cplx t{};
    for (int i = 0; i < d; ++i) t += std::conj(gk[i]) * comp[i][k];
    cplx sA{};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        sA += std::conj(gk[i]) * A[static_cast<std::size_t>(i * d + j)] * gk[j];
    const double denom = sA.real() + m2;  // symbol is real for symmetric A
    cplx u = (s2 == 0.0 && m2 == 0.0) ? cplx{} : t / denom;
    for (int i = 0; i < d; ++i) comp[i][k] = gk[i] * u;
  }

  VectorField<T> out(lat);
  for (int i = 0; i < d; ++i) {
    sc.backward(comp[i].data());
    for (std::size_t x = 0; x < n; ++x) {
      if constexpr (std::is_same_v<T, double>)
        out.at(x, i) = comp[i][x].real();
      else
        out.at(x, i) = comp[i][x];
    }
  }
  return out;
}

/// grad (-Delta + m2)^{-1} div. Zero mode maps to zero at m2 = 0.
template <class T>
VectorField<T> cz_apply(const VectorField<T>& F, double m2) {
  const int d = F.lat.dim();
  std::vector<double> I(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) I[static_cast<std::size_t>(i * d + i)] = 1.0;
  return grad_solve_div(F, I, m2);
}

/// Quadratic form [div a, (-c Delta + m2)^{-1} div a]; the Gaussian
/// comparison quantity appearing throughout the variance/free-energy bounds.
template <class T>
auto green_form(const VectorField<T>& a, double c, double m2) {
  ScalarField<T> t = divergence(a);
  ScalarField<T> u = helmholtz_solve(t, m2 / c);
  return dot(t, u) / c;
}

}  // namespace gfl
