#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gfl {

using cplx = std::complex<double>;

inline double real_part(double x) { return x; }
inline double real_part(const cplx& x) { return x.real(); }
inline double imag_part(double) { return 0.0; }
inline double imag_part(const cplx& x) { return x.imag(); }

/// Periodic cubic lattice Q_L in dimension d with L^d sites, row-major
/// site order (last coordinate fastest).
class Lattice {
public:
  Lattice(int d, int L) : d_(d), L_(L) {
    if (d < 1) throw std::invalid_argument("lattice dimension must be >= 1");
    if (L < 2 || L % 2 != 0)
      throw std::invalid_argument("lattice side L must be an even integer >= 2");
    n_ = 1;
    for (int i = 0; i < d; ++i) n_ *= static_cast<std::size_t>(L);
    strides_.resize(d);
    std::size_t s = 1;
    for (int i = d - 1; i >= 0; --i) {
      strides_[i] = s;
      s *= static_cast<std::size_t>(L);
    }
  }

  int dim() const { return d_; }
  int side() const { return L_; }
  std::size_t n_sites() const { return n_; }

  /// Site index shifted by +1 (or -1) along direction `dir`, with wraparound.
  std::size_t neighbor(std::size_t idx, int dir, int step) const {
    const std::size_t stride = strides_[dir];
    const int c = static_cast<int>((idx / stride) % static_cast<std::size_t>(L_));
    int cn = (c + step) % L_;
    if (cn < 0) cn += L_;
    return idx + (static_cast<std::size_t>(cn) - static_cast<std::size_t>(c)) * stride;
  }

  std::vector<int> coords(std::size_t idx) const {
    std::vector<int> x(d_);
    for (int i = 0; i < d_; ++i)
      x[i] = static_cast<int>((idx / strides_[i]) % static_cast<std::size_t>(L_));
    return x;
  }

  std::size_t index(const std::vector<int>& x) const {
    std::size_t idx = 0;
    for (int i = 0; i < d_; ++i) {
      int c = x[i] % L_;
      if (c < 0) c += L_;
      idx += static_cast<std::size_t>(c) * strides_[i];
    }
    return idx;
  }

  bool operator==(const Lattice& o) const { return d_ == o.d_ && L_ == o.L_; }

private:
  int d_;
  int L_;
  std::size_t n_;
  std::vector<std::size_t> strides_;
};

/// Scalar field phi : Q_L -> T.
template <class T>
struct ScalarField {
  Lattice lat;
  std::vector<T> v;

  explicit ScalarField(const Lattice& l) : lat(l), v(l.n_sites(), T{}) {}
  ScalarField(const Lattice& l, std::vector<T> values) : lat(l), v(std::move(values)) {
    if (v.size() != lat.n_sites())
      throw std::invalid_argument("scalar field value count != n_sites");
  }
  T& operator[](std::size_t i) { return v[i]; }
  const T& operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

/// Vector field F : Q_L -> T^d, components stored innermost.
template <class T>
struct VectorField {
  Lattice lat;
  std::vector<T> v;

  explicit VectorField(const Lattice& l)
      : lat(l), v(l.n_sites() * static_cast<std::size_t>(l.dim()), T{}) {}
  VectorField(const Lattice& l, std::vector<T> values) : lat(l), v(std::move(values)) {
    if (v.size() != lat.n_sites() * static_cast<std::size_t>(lat.dim()))
      throw std::invalid_argument("vector field value count != d * n_sites");
  }
  T& at(std::size_t site, int comp) {
    return v[site * static_cast<std::size_t>(lat.dim()) + static_cast<std::size_t>(comp)];
  }
  const T& at(std::size_t site, int comp) const {
    return v[site * static_cast<std::size_t>(lat.dim()) + static_cast<std::size_t>(comp)];
  }
};

using RealScalarField = ScalarField<double>;
using RealVectorField = VectorField<double>;
using ComplexScalarField = ScalarField<cplx>;
using ComplexVectorField = VectorField<cplx>;

// --- inner products -------------------------------------------------------
// [.,.]_L is bilinear (no conjugation); the complex pairings arise as
// analytic continuations of the real Euclidean inner product.

template <class A, class B>
auto dot(const ScalarField<A>& f, const ScalarField<B>& g) {
  decltype(A{} * B{}) s{};
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * g.v[i];
  return s;
}

template <class A, class B>
auto dot(const VectorField<A>& f, const VectorField<B>& g) {
  decltype(A{} * B{}) s{};
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * g.v[i];
  return s;
}

template <class F>
double norm2(const F& f) {
  double s = 0;
  for (const auto& x : f.v) s += std::norm(cplx(x));
  return std::sqrt(s);
}

template <class T>
VectorField<double> real_field(const VectorField<T>& f) {
  VectorField<double> r(f.lat);
  for (std::size_t i = 0; i < f.v.size(); ++i) r.v[i] = real_part(f.v[i]);
  return r;
}

template <class T>
VectorField<double> imag_field(const VectorField<T>& f) {
  VectorField<double> r(f.lat);
  for (std::size_t i = 0; i < f.v.size(); ++i) r.v[i] = imag_part(f.v[i]);
  return r;
}

inline ComplexVectorField complexify(const RealVectorField& re, const RealVectorField& im) {
  ComplexVectorField f(re.lat);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = cplx(re.v[i], im.v[i]);
  return f;
}

inline ComplexVectorField complexify(const RealVectorField& re) {
  ComplexVectorField f(re.lat);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = cplx(re.v[i], 0.0);
  return f;
}

// --- elementwise helpers ---------------------------------------------------

template <class F, class T>
F& scale(F& f, T c) {
  for (auto& x : f.v) x *= c;
  return f;
}

template <class F>
F& axpy(F& y, double a, const F& x) {
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
  return y;
}

}  // namespace gfl
