#pragma once

#include "gfl/dynamics.hpp"
#include "gfl/estimator.hpp"
#include "gfl/potential.hpp"
#include "gfl/spectral.hpp"

#include <cstdint>
#include <vector>

namespace gfl {

struct SamplerOptions {
  std::size_t chains = 8;
  std::size_t samples_per_chain = 2000;  // retained per chain, after burn-in
  std::size_t thin = 10;
  std::uint64_t seed = 1;
};

/// Complex-valued Monte Carlo estimate (real and imaginary SE tracked
/// separately; the pairings are bilinear, not sesquilinear).
struct ComplexEstimate {
  cplx mean{};
  double se_re = 0, se_im = 0;
  std::size_t n = 0;
  double se_abs() const { return std::sqrt(se_re * se_re + se_im * se_im); }
};

/// Exact Gaussian free-energy difference
///   q(h) - q(0) = -1/2 [h, grad (div A grad + m2)^{-1} div h],
/// evaluated spectrally (the constant-coefficient operator is Fourier
/// diagonal for every symmetric A).
template <class T>
T gaussian_q_exact(const Potential& V, double m2, const VectorField<T>& h);

/// q(h) - q(0) by tensor-product Gauss-Hermite quadrature on a tiny lattice
/// (n_sites <= 6). Both q values use the same rule so the additive constant
/// cancels. Throws if the `nodes` vs `nodes_check` values differ by > 1e-6.
double q_brute_force(const Potential& V, double m2, double eps, const RealVectorField& h,
                     int nodes = 32, int nodes_check = 48);

/// Stationary mean of the pairing [pair_with, grad phi] under the tilted
/// measure. Real h samples with MALA (exact stationarity); complex h runs
/// the exponential-Euler complex dynamics (O(dt) bias, dt-refinable).
ComplexEstimate tilted_mean_pairing(const SdeConfig<double>& cfg, const RealVectorField& pair_with,
                                    const SamplerOptions& opt);
ComplexEstimate tilted_mean_pairing(const SdeConfig<cplx>& cfg, const ComplexVectorField& pair_with,
                                    const SamplerOptions& opt);

/// Stationary mean gradient g(h) = < grad phi >; se is the max component SE.
template <class T>
struct MeanGradient {
  VectorField<T> g;
  double se = 0;
};
MeanGradient<double> mean_gradient(const SdeConfig<double>& cfg, const SamplerOptions& opt);
MeanGradient<cplx> mean_gradient(const SdeConfig<cplx>& cfg, const SamplerOptions& opt);

/// Thermodynamic integration q(h) - q(0) = int_0^1 [h, g(alpha h)] d alpha
/// with Gauss-Legendre nodes in alpha.
ComplexEstimate q_thermo_integration(const SdeConfig<double>& cfg, const SamplerOptions& opt,
                                     int gl_nodes = 8);
ComplexEstimate q_thermo_integration(const SdeConfig<cplx>& cfg, const SamplerOptions& opt,
                                     int gl_nodes = 8);

/// Direct Monte Carlo mean of exp(-[a, grad phi]/eps) at stationarity
/// (high-variance; the thermodynamic-integration route is preferred).
EstimatorResult exp_moment(const SdeConfig<double>& cfg, const RealVectorField& a,
                           const SamplerOptions& opt);

/// Mean of exp(eps^{-1/2} ([a, grad phi] - mean)) — the centered
/// exponential-concentration observable.
EstimatorResult exp_moment_centered(const SdeConfig<double>& cfg, const RealVectorField& a,
                                    const SamplerOptions& opt);

/// Per-site stationarity diagnostic: mean of dW/dphi(x) along a MALA chain,
/// zero at exact stationarity.
std::vector<EstimatorResult> schwinger_dyson_residual(const SdeConfig<double>& cfg,
                                                      const SamplerOptions& opt);

}  // namespace gfl
