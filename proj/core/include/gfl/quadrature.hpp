#pragma once

#include <vector>

namespace gfl {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule: int f(x) e^{-x^2} dx ~= sum w_i f(x_i).
QuadRule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1]; map_to(rule, a, b) rescales to [a, b].
QuadRule gauss_legendre(int n);
QuadRule map_to(const QuadRule& r, double a, double b);

}  // namespace gfl
