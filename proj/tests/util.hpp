#pragma once

#include "gfl/lattice.hpp"
#include "gfl/rng.hpp"

#include <vector>

namespace gfl::testutil {

inline RealScalarField random_scalar(const Lattice& lat, std::uint64_t seed) {
  Rng rng(seed, 0);
  RealScalarField f(lat);
  for (auto& x : f.v) x = rng.next_normal();
  return f;
}

inline RealVectorField random_vector(const Lattice& lat, std::uint64_t seed, double norm = 0.0) {
  Rng rng(seed, 1);
  RealVectorField F(lat);
  for (auto& x : F.v) x = rng.next_normal();
  if (norm > 0) {
    const double n = norm2(F);
    if (n > 0) scale(F, norm / n);
  }
  return F;
}

inline std::vector<double> identity_matrix(int d, double alpha = 1.0) {
  std::vector<double> A(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(i * d + i)] = alpha;
  return A;
}

}  // namespace gfl::testutil
