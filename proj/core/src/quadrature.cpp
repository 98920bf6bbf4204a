#include "gfl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gfl {

namespace {

// Gauss rule from the symmetric Jacobi matrix (diag = 0 here, both families
// are symmetric weights): cyclic Jacobi rotations give the nodes, which are
// then Newton-polished on the orthonormal recurrence.
QuadRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  std::vector<double> A(static_cast<std::size_t>(n * n), 0.0);
  auto at = [&](int i, int j) -> double& { return A[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i + 1 < n; ++i) {
    at(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
    at(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
  }
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = 0.5 * std::atan2(2.0 * at(p, q), at(q, q) - at(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
      }
  }

  QuadRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return at(i, i) < at(j, j); });
  for (int i = 0; i < n; ++i) {
    const int c = order[static_cast<std::size_t>(i)];
    r.nodes[static_cast<std::size_t>(i)] = at(c, c);
  }

  // Polish each node with Newton on the degree-n orthonormal polynomial and
  // recover the weight from the Christoffel sum 1/sum_k p_k(x)^2.  The
  // eigenvector route only gives weights to absolute accuracy ~eps^2, which
  // ruins the tiny extreme weights of large Hermite rules; the recurrence
  // route is accurate in relative terms.
  const double p0 = 1.0 / std::sqrt(mu0);
  auto eval = [&](double x, double& pn, double& dpn, double& christoffel) {
    double pm = 0.0, dm = 0.0, p = p0, dp = 0.0, s = p0 * p0;
    for (int k = 1; k <= n; ++k) {
      // b_n is outside the Jacobi matrix; any positive stand-in only rescales
      // p_n and cancels in the Newton step p_n / p_n'
      const double bk = k < n ? offdiag[static_cast<std::size_t>(k - 1)] : 1.0;
      const double bkm = k >= 2 ? offdiag[static_cast<std::size_t>(k - 2)] : 0.0;
      const double pk = (x * p - bkm * pm) / bk;
      const double dk = (p + x * dp - bkm * dm) / bk;
      pm = p;
      dm = dp;
      p = pk;
      dp = dk;
      if (k < n) s += p * p;
    }
    pn = p;
    dpn = dp;
    christoffel = s;
  };
  for (int i = 0; i < n; ++i) {
    double x = r.nodes[static_cast<std::size_t>(i)];
    double pn = 0, dpn = 0, s = 0;
    for (int it = 0; it < 8; ++it) {
      eval(x, pn, dpn, s);
      const double step = pn / dpn;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    eval(x, pn, dpn, s);
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 1.0 / s;
  }
  return r;
}

}  // namespace

QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1");
  std::vector<double> b(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) b[static_cast<std::size_t>(k - 1)] = std::sqrt(k / 2.0);
  return golub_welsch(b, std::sqrt(M_PI));
}

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  std::vector<double> b(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k)
    b[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(b, 2.0);
}

QuadRule map_to(const QuadRule& r, double a, double b) {
  QuadRule out = r;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (auto& x : out.nodes) x = mid + half * x;
  for (auto& w : out.weights) w *= half;
  return out;
}

}  // namespace gfl
