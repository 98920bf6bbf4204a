#pragma once

#include "gfl/free_energy.hpp"

#include <string>
#include <vector>

namespace gfl {

/// One executable inequality check. margin = (rhs - lhs)/se is the
/// assertion unit; PASS iff margin >= -3 (one-sided 3-SE test).
struct BoundCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double se = 0;
  double margin = 0;
  std::string verdict;  // PASS | FAIL | SKIPPED
  std::string note;
};

BoundCheck make_bound_check(const std::string& name, double lhs, double rhs, double se,
                            const std::string& note = "");
BoundCheck make_skipped(const std::string& name, const std::string& reason);

/// Variance sandwich for X = [a, grad phi]:
///   [div a, (-Lambda Delta + m2)^{-1} div a] <= var(X)/eps
///                                            <= [div a, (-lambda Delta + m2)^{-1} div a].
std::vector<BoundCheck> check_variance_bounds(const SdeConfig<double>& cfg,
                                              const RealVectorField& a,
                                              const SamplerOptions& opt);

/// Free-energy sandwich for real h (h taken from cfg):
///   -1/2 (lambda form) <= q(h) - q(0) <= -1/2 (Lambda form).
std::vector<BoundCheck> check_q_sandwich(const SdeConfig<double>& cfg, const SamplerOptions& opt);

/// Complex-h bounds on Re[q(h) - q(0)]: the analytic-continuation upper
/// and lower bounds plus the contour-deformation lower bound with its
/// l_p admissibility precondition. kappa2 is the (lower) estimate of the
/// l_2 projection norm used conservatively in the precondition.
std::vector<BoundCheck> check_complex_bounds(const SdeConfig<cplx>& cfg, double eta,
                                             const SamplerOptions& opt, double kappa2 = 1.0);

/// Cubic Taylor remainder:
///   |q(h) - q(0) + <[h, grad phi]^2>_0 / 2 eps| <= M ||h||_2^3 / (6 lambda_c^3).
BoundCheck check_cubic_remainder(const SdeConfig<double>& cfg, const SamplerOptions& opt);

/// Exponential concentration of the centered pairing:
///   < exp( ([a, grad phi] - mean)/sqrt(eps) ) >
///     <= exp( [div a, (-Delta+m2)^{-1} div a] / 2 lambda_c ).
BoundCheck check_exp_concentration(const SdeConfig<double>& cfg, const RealVectorField& a,
                                   const SamplerOptions& opt);

/// Two-sided (or upper-only) bound on the exponential moment of the
/// field at a point, through its test-function representation:
///   exp(C rho^2 / 2 eps) <= exp(-(q(rho h)-q(0))/eps) <= exp(C rho^2 / 2 lambda eps),
/// with C defined operationally as the Gaussian form [div h, (-Delta+m2)^{-1} div h].
std::vector<BoundCheck> check_exp_phi_bounds(const SdeConfig<double>& cfg,
                                             const RealVectorField& h_test, double rho,
                                             const SamplerOptions& opt, bool two_sided);

struct CZNormEstimate {
  double p = 2;
  double kappa_p_lower = 0;  // max ratio over probes; always a lower estimate
};

/// Lower estimate of the l_p operator norm of grad (-Delta+m2)^{-1} div by
/// probe maximization plus duality-map power iteration.
CZNormEstimate estimate_kappa_p(const Lattice& lat, double m2, double p, int probes,
                                std::uint64_t seed = 7);

}  // namespace gfl
