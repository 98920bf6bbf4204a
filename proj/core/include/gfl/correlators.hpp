#pragma once

#include "gfl/estimator.hpp"
#include "gfl/free_energy.hpp"
#include "gfl/lattice.hpp"
#include "gfl/potential.hpp"

#include <vector>

namespace gfl {

/// Periodic Green function: (-Delta + nu) G = delta_0 on Q_L, spectrally.
RealScalarField green_periodic(int d, int L, double nu);

/// Green function of Z^d realized as a large-torus limit: L is doubled
/// until the wraparound error within the window |y|_inf <= window_radius
/// drops below 1e-8. Index the field through G.lat.
struct ZdGreen {
  RealScalarField G;
  int window_radius;
};
ZdGreen green_zd(int d, double nu, int window_radius, int max_L = 4096);

/// Dipole test function h_{x,nu,L}(y) = grad G_{nu,L}(y - x) on the torus.
RealVectorField dipole_test_function(int d, int L, double nu, std::size_t x);

/// Linear-in-nu Richardson extrapolation to nu = 0 from the two smallest
/// grid points.
double richardson_nu(const std::vector<double>& nu, const std::vector<double>& values);

/// Charge-charge covariance at separation x through the free-energy
/// representation: three thermodynamic-integration q-differences, never
/// direct exponential averaging.
struct ChargeCovariance {
  double cov = 0;       // cov{ exp(rho phi(x)/eps), exp(-rho phi(0)/eps) } (regularized)
  double se = 0;
  double cross = 0;     // q(h+h') - q(h) - q(h') + q(0)
  double cross_se = 0;
  double d2q_term = 0;  // D^2_{h,h'} q(0) contribution to the exponent
  double remainder = 0; // cross - d2q_term (the cubic-order error term)
  double mean_x = 0, mean_0 = 0;  // the two exponential means exp(-dq/eps)
};
ChargeCovariance charge_covariance(const SdeConfig<double>& cfg, std::size_t x, double rho,
                                   double nu, const SamplerOptions& opt);

/// log < exp( rho (phi(x) - phi(0)) / eps ) > via thermodynamic integration
/// with the difference test function h = -rho (h_{x,nu,L} - h_{0,nu,L}).
EstimatorResult d2_increment_moment(const SdeConfig<double>& cfg, std::size_t x, double rho,
                                    double nu, const SamplerOptions& opt);

/// Homogenized coefficient estimate.
struct HomogenizedModel {
  std::vector<double> a_hom;  // d x d row-major, symmetric
  bool exact = false;         // gaussian closed-form path
  bool clipped = false;       // eigenvalues clipped into [lambda, Lambda]
};
HomogenizedModel estimate_hom_matrix(const SdeConfig<double>& cfg, const SamplerOptions& opt);

}  // namespace gfl
