#pragma once

#include "gfl/estimator.hpp"
#include "gfl/lattice.hpp"
#include "gfl/operators.hpp"
#include "gfl/potential.hpp"
#include "gfl/rng.hpp"
#include "gfl/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gfl {

enum class Scheme { euler_maruyama, exponential_euler, mala };

/// Preconditioned Langevin configuration:
///   d phi = -1/2 [phi + A div h + A div(V'(grad phi) - grad phi)] dt
///           + sqrt(eps) A^{1/2} dW,   A = (-Delta + m2)^{-1}.
template <class T>
struct SdeConfig {
  Potential V;
  VectorField<T> h;
  double epsilon = 1.0;
  double m2 = 1.0;
  double dt = 0.0;  // 0 -> default 0.01 * lambda_c / Lambda
  Scheme scheme = Scheme::exponential_euler;
  // Complex runs abort if any |Im grad phi| reaches this (step-size artifact
  // guard; admissible inputs stay strictly inside the strip).
  double strip_delta = STRIP_INFINITE;

  const Lattice& lattice() const { return h.lat; }
  double step_size() const {
    return dt > 0 ? dt : 0.01 * V.lambda_c() / V.Lambda();
  }
  std::size_t default_burn_in() const {
    return static_cast<std::size_t>(std::ceil(10.0 / (V.lambda_c() * step_size())));
  }
};

template <class T>
struct ChainState {
  ScalarField<T> phi;
  double t = 0;
  Rng rng;
  std::size_t accepted = 0, proposed = 0;  // MALA bookkeeping
};

template <class T>
struct Trajectory {
  std::vector<ScalarField<T>> phis;  // retained states, spaced thin*dt apart
  double dt = 0;                     // integrator step
  std::size_t thin = 1;
  std::uint64_t seed = 0, chain_id = 0;
};

/// W_{m,h,L}(phi) = sum_x [ m2 phi^2/2 + h.grad phi + V(grad phi) ].
template <class T>
T action(const ScalarField<T>& phi, const SdeConfig<T>& cfg) {
  VectorField<T> w = gradient(phi);
  T s = cfg.V.action_sum(w) + dot(cfg.h, w);
  T p{};
  for (const T& x : phi.v) p += x * x;
  return s + 0.5 * cfg.m2 * p;
}

/// -1/2 [ div h + m2 phi + div V'(grad phi) ]  (unpreconditioned drift,
/// equal to -1/2 the action gradient).
template <class T>
ScalarField<T> drift_standard(const ScalarField<T>& phi, const SdeConfig<T>& cfg) {
  VectorField<T> w = gradient(phi);
  VectorField<T> F = cfg.V.dV(w);
  axpy(F, 1.0, cfg.h);
  ScalarField<T> out = divergence(F);
  axpy(out, cfg.m2, phi);
  scale(out, -0.5);
  return out;
}

/// The nonlinear target N(phi) = -A div h - A div(V'(grad phi) - grad phi);
/// the preconditioned drift is -1/2 (phi - N(phi)).
template <class T>
ScalarField<T> drift_target(const ScalarField<T>& phi, const SdeConfig<T>& cfg) {
  VectorField<T> w = gradient(phi);
  VectorField<T> F = cfg.V.dV(w);
  axpy(F, -1.0, w);
  axpy(F, 1.0, cfg.h);
  ScalarField<T> t = divergence(F);
  ScalarField<T> out = helmholtz_solve(t, cfg.m2);
  scale(out, -1.0);
  return out;
}

template <class T>
ScalarField<T> drift_preconditioned(const ScalarField<T>& phi, const SdeConfig<T>& cfg) {
  ScalarField<T> n = drift_target(phi, cfg);
  ScalarField<T> out = phi;
  axpy(out, -1.0, n);
  scale(out, -0.5);
  return out;
}

/// One preconditioned noise increment: scale * A^{1/2} xi with xi i.i.d.
/// standard normal per site. The driving noise is real also for complex
/// chains (analytic continuation acts on h only).
inline RealScalarField white_noise(const Lattice& lat, Rng& rng) {
  RealScalarField xi(lat);
  for (auto& x : xi.v) x = rng.next_normal();
  return xi;
}

inline RealScalarField noise_preconditioned(const Lattice& lat, double m2, double scale,
                                            Rng& rng) {
  RealScalarField xi = white_noise(lat, rng);
  RealScalarField out = sqrt_inv_apply(xi, m2);
  gfl::scale(out, scale);
  return out;
}

/// ||v||^2 in the A^{-1} = (-Delta+m2) inner product, by stencil.
template <class T>
double a_inv_norm2(const ScalarField<T>& v, double m2) {
  ScalarField<T> Lv = laplacian_apply(v);
  axpy(Lv, m2, v);
  return real_part(dot(v, Lv));
}

template <class T>
void check_strip(const ScalarField<T>& phi, const SdeConfig<T>& cfg) {
  if constexpr (std::is_same_v<T, cplx>) {
    if (cfg.strip_delta >= STRIP_INFINITE) return;
    VectorField<T> w = gradient(phi);
    const double im = max_site_imag(w);
    if (im >= cfg.strip_delta) {
      std::ostringstream msg;
      msg << "complex chain left the admissible strip: max |Im grad phi| = " << im
          << " >= delta = " << cfg.strip_delta
          << " (reduce dt; admissible inputs cannot reach the boundary)";
      throw std::runtime_error(msg.str());
    }
  }
}

template <class T>
void step(ChainState<T>& st, const SdeConfig<T>& cfg) {
  const double dt = cfg.step_size();
  const Lattice& lat = cfg.lattice();
  switch (cfg.scheme) {
    case Scheme::euler_maruyama: {
      ScalarField<T> b = drift_preconditioned(st.phi, cfg);
      axpy(st.phi, dt, b);
      RealScalarField n = noise_preconditioned(lat, cfg.m2, std::sqrt(cfg.epsilon * dt), st.rng);
      for (std::size_t i = 0; i < st.phi.v.size(); ++i) st.phi.v[i] += n.v[i];
      break;
    }
    case Scheme::exponential_euler: {
      // exact OU treatment of the linear part (integral form of the SDE)
      ScalarField<T> n = drift_target(st.phi, cfg);
      const double e = std::exp(-dt / 2.0);
      for (std::size_t i = 0; i < st.phi.v.size(); ++i)
        st.phi.v[i] = e * st.phi.v[i] + (1.0 - e) * n.v[i];
      RealScalarField z = noise_preconditioned(
          lat, cfg.m2, std::sqrt(cfg.epsilon * (1.0 - std::exp(-dt))), st.rng);
      for (std::size_t i = 0; i < st.phi.v.size(); ++i) st.phi.v[i] += z.v[i];
      break;
    }
    case Scheme::mala: {
      if constexpr (std::is_same_v<T, cplx>) {
        throw std::logic_error("MALA requires real h (no complex target density)");
      } else {
        ScalarField<T> b = drift_preconditioned(st.phi, cfg);
        ScalarField<T> mu = st.phi;
        axpy(mu, dt, b);
        RealScalarField z =
            noise_preconditioned(lat, cfg.m2, std::sqrt(cfg.epsilon * dt), st.rng);
        ScalarField<T> prop = mu;
        for (std::size_t i = 0; i < prop.v.size(); ++i) prop.v[i] += z.v[i];
        ScalarField<T> bp = drift_preconditioned(prop, cfg);
        ScalarField<T> mup = prop;
        axpy(mup, dt, bp);
        ScalarField<T> fwd = prop;   // prop - mu
        axpy(fwd, -1.0, mu);
        ScalarField<T> rev = st.phi;  // phi - mu'
        axpy(rev, -1.0, mup);
        const double log_q = (a_inv_norm2(fwd, cfg.m2) - a_inv_norm2(rev, cfg.m2)) /
                             (2.0 * cfg.epsilon * dt);
        const double log_alpha =
            (action(st.phi, cfg) - action(prop, cfg)) / cfg.epsilon + log_q;
        ++st.proposed;
        const double u = st.rng.next_uniform();  // drawn unconditionally: stream alignment
        if (std::log(u) < log_alpha) {
          st.phi = std::move(prop);
          ++st.accepted;
        }
        break;
      }
    }
  }
  st.t += dt;
  check_strip(st.phi, cfg);
}

/// Reproducible trajectory: (seed, chain_id) fully determines the path.
template <class T>
Trajectory<T> run_chain(const SdeConfig<T>& cfg, std::size_t total_steps,
                        std::size_t burn_in, std::size_t thin, std::uint64_t seed,
                        std::uint64_t chain_id = 0,
                        const std::optional<ScalarField<T>>& init = std::nullopt) {
  if (!(cfg.m2 > 0)) throw std::domain_error("sampling requires m2 > 0");
  if (burn_in >= total_steps) throw std::invalid_argument("burn_in must be < total_steps");
  if (thin == 0) thin = 1;
  ChainState<T> st{init ? *init : ScalarField<T>(cfg.lattice()), 0.0, Rng(seed, chain_id)};
  Trajectory<T> traj;
  traj.dt = cfg.step_size();
  traj.thin = thin;
  traj.seed = seed;
  traj.chain_id = chain_id;
  traj.phis.reserve((total_steps - burn_in) / thin + 1);
  for (std::size_t s = 0; s < total_steps; ++s) {
    step(st, cfg);
    if (s + 1 > burn_in && (s + 1 - burn_in) % thin == 0) traj.phis.push_back(st.phi);
  }
  return traj;
}

}  // namespace gfl
