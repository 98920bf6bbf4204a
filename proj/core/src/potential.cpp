#include "gfl/potential.hpp"

#include <algorithm>
#include <cmath>

namespace gfl {

namespace {

// Extreme eigenvalues of a small symmetric matrix by cyclic Jacobi sweeps.
std::pair<double, double> eigen_extremes(std::vector<double> A, int d) {
  auto at = [&](int i, int j) -> double& { return A[static_cast<std::size_t>(i * d + j)]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-28) break;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = 0.5 * std::atan2(2.0 * at(p, q), at(q, q) - at(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < d; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < d; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
      }
  }
  double lo = at(0, 0), hi = at(0, 0);
  for (int i = 1; i < d; ++i) {
    lo = std::min(lo, at(i, i));
    hi = std::max(hi, at(i, i));
  }
  return {lo, hi};
}

}  // namespace

Potential Potential::gaussian(int d, std::vector<double> A_rowmajor) {
  if (d < 1) throw std::invalid_argument("potential dimension must be >= 1");
  if (A_rowmajor.size() != static_cast<std::size_t>(d * d))
    throw std::invalid_argument("gaussian potential needs a d x d matrix");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(A_rowmajor[static_cast<std::size_t>(i * d + j)] -
                   A_rowmajor[static_cast<std::size_t>(j * d + i)]) > 1e-12)
        throw std::invalid_argument("gaussian potential matrix must be symmetric");
  Potential V(Kind::gaussian, d);
  V.A_ = std::move(A_rowmajor);
  auto [lo, hi] = eigen_extremes(V.A_, d);
  if (!(lo > 0)) throw std::invalid_argument("gaussian potential matrix must be positive definite");
  V.cc_ = {lo, hi};
  return V;
}

Potential Potential::dipole(int d, double a) {
  if (d < 1) throw std::invalid_argument("potential dimension must be >= 1");
  if (!(std::abs(a) < 1)) throw std::invalid_argument("dipole coupling requires |a| < 1");
  Potential V(Kind::dipole, d);
  V.a_ = a;
  V.cc_ = {1.0 - std::abs(a), 1.0 + std::abs(a)};
  return V;
}

StripConstants Potential::strip_constants(double eta) const {
  if (!(eta > 0)) throw std::domain_error("strip_constants requires eta > 0");
  if (kind_ == Kind::gaussian || a_ == 0.0) return {eta, STRIP_INFINITE, 0.0, 0.0};
  // |cos(w) - cos(Re w)| <= e^{|Im w|} - 1, so ||V''(w) - V''(Re w)|| <= eta
  // whenever |Im w| <= ln(1 + eta/|a|).
  const double aa = std::abs(a_);
  const double delta = std::log(1.0 + eta / aa);
  return {eta, delta, aa, aa * std::cosh(delta)};
}

}  // namespace gfl
