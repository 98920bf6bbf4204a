#pragma once

#include "gfl/dynamics.hpp"
#include "gfl/estimator.hpp"
#include "gfl/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gfl {

/// Pathwise derivative of omega(.,t) = grad phi(.,t) with respect to the
/// tilt direction(s), on the trajectory time grid t_j = j dt.
template <class T>
struct VariationFlow {
  std::vector<VectorField<T>> f;
  double dt = 0;
  int iters = 0;
  double residual = 0;
};

/// omega(.,t_j), j = 0..steps, for the chain started at phi = 0.
template <class T>
std::vector<VectorField<T>> trajectory_omegas(const SdeConfig<T>& cfg, std::size_t steps,
                                              std::uint64_t seed, std::uint64_t chain_id = 0) {
  std::vector<VectorField<T>> out;
  out.reserve(steps + 1);
  ChainState<T> st{ScalarField<T>(cfg.lattice()), 0.0, Rng(seed, chain_id)};
  out.push_back(gradient(st.phi));
  for (std::size_t s = 0; s < steps; ++s) {
    step(st, cfg);
    out.push_back(gradient(st.phi));
  }
  return out;
}

/// I_j = 1/2 int_0^{t_j} e^{-(t_j - s)/2} u(s) ds by the exponential
/// running trapezoid: J_{j+1} = e^{-dt/2} J_j + dt/2 (e^{-dt/2} u_j + u_{j+1}).
template <class T>
std::vector<VectorField<T>> exp_half_integral(const std::vector<VectorField<T>>& u, double dt) {
  std::vector<VectorField<T>> out;
  out.reserve(u.size());
  const double e = std::exp(-dt / 2.0);
  VectorField<T> J(u[0].lat);
  out.push_back(J);
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    for (std::size_t i = 0; i < J.v.size(); ++i)
      J.v[i] = e * J.v[i] + 0.5 * dt * (e * u[j].v[i] + u[j + 1].v[i]);
    out.push_back(J);
  }
  for (auto& x : out)
    scale(x, 0.5);
  return out;
}

namespace detail {

/// max_j ||x_j - y_j||_2
template <class T>
double flow_distance(const std::vector<VectorField<T>>& x, const std::vector<VectorField<T>>& y) {
  double m = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < x[j].v.size(); ++i) s += std::norm(cplx(x[j].v[i] - y[j].v[i]));
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

inline int contraction_max_iters(const Potential& V) {
  const double rho = 1.0 - V.lambda_c();
  if (rho <= 0) return 2;
  return static_cast<int>(std::ceil(std::log(1e-10) / std::log(rho))) + 4;
}

/// Solves f = L_T f - k by fixed-point iteration;
/// L_T f(., t) = 1/2 int_0^t e^{-(t-s)/2} CZ[(I - V''(omega(s))) f(s)] ds.
template <class T>
VariationFlow<T> solve_flow(const std::vector<VectorField<T>>& omega, double dt, double m2,
                            const Potential& V, const std::vector<VectorField<T>>& k) {
  const std::size_t n = omega.size();
  VariationFlow<T> flow;
  flow.dt = dt;
  flow.f.assign(n, VectorField<T>(omega[0].lat));
  const int max_iters = contraction_max_iters(V);
  std::vector<VectorField<T>> u(n, VectorField<T>(omega[0].lat));
  for (int it = 0; it < max_iters; ++it) {
    for (std::size_t j = 0; j < n; ++j) u[j] = cz_apply(V.b_apply(omega[j], flow.f[j]), m2);
    std::vector<VectorField<T>> next = exp_half_integral(u, dt);
    for (std::size_t j = 0; j < n; ++j) axpy(next[j], -1.0, k[j]);
    const double r = flow_distance(next, flow.f);
    flow.f = std::move(next);
    flow.iters = it + 1;
    flow.residual = r;
    if (r <= 1e-10) return flow;
  }
  throw std::runtime_error(
      "variation flow fixed point did not contract to 1e-10; potential constants inadmissible");
}

}  // namespace detail

/// First variation D_a omega: f = L_T f - k, k(., t) = (1 - e^{-t/2}) CZ[a].
template <class T>
VariationFlow<T> solve_first_variation(const std::vector<VectorField<T>>& omega, double dt,
                                       double m2, const Potential& V, const VectorField<T>& a) {
  const std::size_t n = omega.size();
  VectorField<T> cza = cz_apply(a, m2);
  std::vector<VectorField<T>> k;
  k.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    VectorField<T> kj = cza;
    scale(kj, 1.0 - std::exp(-static_cast<double>(j) * dt / 2.0));
    k.push_back(std::move(kj));
  }
  return detail::solve_flow(omega, dt, m2, V, k);
}

/// Second variation D^2_{a2,a3} omega: g = L_T g - k with
/// k(., t) = 1/2 int_0^t e^{-(t-s)/2} CZ[r(., s)] ds,
/// r_i(x, s) = V'''(omega(x, s))[e_i, f2(x, s), f3(x, s)].
template <class T>
VariationFlow<T> solve_second_variation(const std::vector<VectorField<T>>& omega, double dt,
                                        double m2, const Potential& V,
                                        const VariationFlow<T>& f2, const VariationFlow<T>& f3) {
  const std::size_t n = omega.size();
  std::vector<VectorField<T>> r;
  r.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    r.push_back(cz_apply(V.d3_contract(omega[j], f2.f[j], f3.f[j]), m2));
  std::vector<VectorField<T>> k = exp_half_integral(r, dt);
  return detail::solve_flow(omega, dt, m2, V, k);
}

// --- Monte Carlo derivative estimators -------------------------------------

struct FlowOptions {
  std::size_t chains = 64;
  double horizon = 0;  // 0 -> 12 / lambda_c
  std::uint64_t seed = 1;
};

inline std::size_t flow_steps(const SdeConfig<double>& cfg, double horizon) {
  const double T = horizon > 0 ? horizon : 12.0 / cfg.V.lambda_c();
  return static_cast<std::size_t>(std::ceil(T / cfg.step_size()));
}

/// D^2 q in directions (a1, a2) as lim_T < [a1, D_{a2} omega(., T)] >.
EstimatorResult estimate_d2q_pathwise(const SdeConfig<double>& cfg, const RealVectorField& a1,
                                      const RealVectorField& a2, const FlowOptions& opt);

/// Covariance form: -1/eps cov([a1, grad phi], [a2, grad phi]) along a MALA
/// equilibrium chain.
EstimatorResult estimate_d2q_covariance(const SdeConfig<double>& cfg, const RealVectorField& a1,
                                        const RealVectorField& a2, std::size_t n_samples,
                                        std::uint64_t seed);

/// D^3 q in directions (a1, a2, a3) as lim_T < [a1, D^2_{a2,a3} omega(., T)] >.
EstimatorResult estimate_d3q(const SdeConfig<double>& cfg, const RealVectorField& a1,
                             const RealVectorField& a2, const RealVectorField& a3,
                             const FlowOptions& opt);

}  // namespace gfl
