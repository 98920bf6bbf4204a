#include "gfl/free_energy.hpp"

#include "gfl/operators.hpp"
#include "gfl/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace gfl {

template <class T>
T gaussian_q_exact(const Potential& V, double m2, const VectorField<T>& h) {
  if (V.kind() != Potential::Kind::gaussian)
    throw std::invalid_argument("gaussian_q_exact requires a gaussian potential");
  VectorField<T> u = grad_solve_div(h, V.matrix(), m2);
  T s = dot(h, u);
  return -0.5 * s;
}

template double gaussian_q_exact(const Potential&, double, const RealVectorField&);
template cplx gaussian_q_exact(const Potential&, double, const ComplexVectorField&);

namespace {

// log of the h-dependent factor of the partition function under the
// substitution phi_x = sqrt(2 eps / m2) y_x (Gaussian weight e^{-y^2}
// absorbed by the Hermite rule; the Jacobian cancels in differences).
double log_partition(const Potential& V, double m2, double eps, const RealVectorField& h,
                     const QuadRule& r) {
  const Lattice& lat = h.lat;
  const std::size_t n = lat.n_sites();
  const std::size_t nn = r.nodes.size();
  // Scale the Hermite variable to the geometric mean of the extreme quadratic
  // curvatures of the action (mass-only along constant fields, mass plus the
  // 4d Lambda gradient bound along the stiffest mode).  The mass-only scale
  // stalls the node convergence when m2 is small; the balanced scale keeps
  // the integrand comparable to the exp(-t^2) weight in every direction.
  // The mass weight itself is carried explicitly in the exponent.
  const double curv = std::sqrt(m2 * (m2 + 4.0 * lat.dim() * V.Lambda()));
  const double c = std::sqrt(2.0 * eps / curv);
  std::vector<double> logw(nn);
  for (std::size_t i = 0; i < nn; ++i) logw[i] = std::log(r.weights[i]);

  std::vector<std::size_t> idx(n, 0);
  RealScalarField phi(lat);
  double max_e = -1e300, acc = 0.0;
  for (;;) {
    double lw = 0, t2 = 0, mass = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const double t = r.nodes[idx[s]];
      phi.v[s] = c * t;
      lw += logw[idx[s]];
      t2 += t * t;
      mass += 0.5 * m2 * phi.v[s] * phi.v[s];
    }
    RealVectorField w = gradient(phi);
    const double H = mass + dot(h, w) + V.action_sum(w);
    const double e = lw + t2 - H / eps;
    if (e > max_e) {
      acc = acc * std::exp(max_e - e) + 1.0;
      max_e = e;
    } else {
      acc += std::exp(e - max_e);
    }
    // odometer over the tensor grid
    std::size_t s = 0;
    while (s < n && ++idx[s] == nn) idx[s++] = 0;
    if (s == n) break;
  }
  return max_e + std::log(acc);
}

}  // namespace

double q_brute_force(const Potential& V, double m2, double eps, const RealVectorField& h,
                     int nodes, int nodes_check) {
  if (h.lat.n_sites() > 6)
    throw std::invalid_argument("q_brute_force: n_sites must be <= 6");
  if (!(m2 > 0)) throw std::domain_error("q_brute_force requires m2 > 0");
  RealVectorField h0(h.lat);
  const QuadRule ra = gauss_hermite(nodes);
  const QuadRule rb = gauss_hermite(nodes_check);
  const double qa = -eps * (log_partition(V, m2, eps, h, ra) - log_partition(V, m2, eps, h0, ra));
  const double qb = -eps * (log_partition(V, m2, eps, h, rb) - log_partition(V, m2, eps, h0, rb));
  if (std::abs(qa - qb) > 1e-6)
    throw std::runtime_error("q_brute_force: node-count disagreement > 1e-6 (quadrature unstable)");
  return qb;
}

namespace {

// Collect the stationary series f(phi) per chain and summarize per-chain
// means (independent chains), falling back to batch means for one chain.
template <class T, class F>
std::vector<std::vector<double>> chain_series(const SdeConfig<T>& cfg, const SamplerOptions& opt,
                                              F&& observe) {
  const std::size_t burn = cfg.default_burn_in();
  const std::size_t total = burn + opt.samples_per_chain * opt.thin;
  std::vector<std::vector<double>> out(opt.chains);
  for (std::size_t c = 0; c < opt.chains; ++c) {
    auto traj = run_chain(cfg, total, burn, opt.thin, opt.seed, c);
    out[c].reserve(traj.phis.size());
    for (const auto& phi : traj.phis) out[c].push_back(observe(phi));
  }
  return out;
}

EstimatorResult merge_chains(const std::vector<std::vector<double>>& series) {
  if (series.size() == 1) return batch_means(series[0]);
  std::vector<double> means;
  means.reserve(series.size());
  std::size_t n = 0;
  for (const auto& s : series) {
    means.push_back(summarize(s).mean);
    n += s.size();
  }
  EstimatorResult r = summarize(means);
  r.n = n;
  return r;
}

}  // namespace

ComplexEstimate tilted_mean_pairing(const SdeConfig<double>& cfg, const RealVectorField& pair_with,
                                    const SamplerOptions& opt) {
  SdeConfig<double> c = cfg;
  c.scheme = Scheme::mala;  // exact stationarity for real h
  auto series = chain_series(c, opt, [&](const RealScalarField& phi) {
    return dot(pair_with, gradient(phi));
  });
  EstimatorResult r = merge_chains(series);
  return {cplx(r.mean, 0.0), r.se, 0.0, r.n};
}

ComplexEstimate tilted_mean_pairing(const SdeConfig<cplx>& cfg, const ComplexVectorField& pair_with,
                                    const SamplerOptions& opt) {
  SdeConfig<cplx> c = cfg;
  c.scheme = Scheme::exponential_euler;
  std::vector<std::vector<double>> re(opt.chains), im(opt.chains);
  const std::size_t burn = c.default_burn_in();
  const std::size_t total = burn + opt.samples_per_chain * opt.thin;
  for (std::size_t ch = 0; ch < opt.chains; ++ch) {
    auto traj = run_chain(c, total, burn, opt.thin, opt.seed, ch);
    for (const auto& phi : traj.phis) {
      const cplx v = dot(pair_with, gradient(phi));
      re[ch].push_back(v.real());
      im[ch].push_back(v.imag());
    }
  }
  EstimatorResult rr = merge_chains(re), ri = merge_chains(im);
  return {cplx(rr.mean, ri.mean), rr.se, ri.se, rr.n};
}

namespace {

template <class T>
MeanGradient<T> mean_gradient_impl(const SdeConfig<T>& cfg, const SamplerOptions& opt,
                                   Scheme scheme) {
  SdeConfig<T> c = cfg;
  c.scheme = scheme;
  const Lattice& lat = cfg.lattice();
  const std::size_t nv = lat.n_sites() * static_cast<std::size_t>(lat.dim());
  std::vector<std::vector<T>> chain_mean(opt.chains, std::vector<T>(nv, T{}));
  const std::size_t burn = c.default_burn_in();
  const std::size_t total = burn + opt.samples_per_chain * opt.thin;
  for (std::size_t ch = 0; ch < opt.chains; ++ch) {
    auto traj = run_chain(c, total, burn, opt.thin, opt.seed, ch);
    for (const auto& phi : traj.phis) {
      VectorField<T> w = gradient(phi);
      for (std::size_t i = 0; i < nv; ++i) chain_mean[ch][i] += w.v[i];
    }
    for (auto& x : chain_mean[ch]) x *= 1.0 / static_cast<double>(opt.samples_per_chain);
  }
  MeanGradient<T> out{VectorField<T>(lat), 0.0};
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<double> res(opt.chains), ims(opt.chains);
    for (std::size_t ch = 0; ch < opt.chains; ++ch) {
      res[ch] = real_part(chain_mean[ch][i]);
      ims[ch] = imag_part(chain_mean[ch][i]);
    }
    EstimatorResult rr = summarize(res);
    out.se = std::max(out.se, rr.se);
    if constexpr (std::is_same_v<T, cplx>) {
      EstimatorResult ri = summarize(ims);
      out.g.v[i] = cplx(rr.mean, ri.mean);
      out.se = std::max(out.se, ri.se);
    } else {
      out.g.v[i] = rr.mean;
    }
  }
  return out;
}

}  // namespace

MeanGradient<double> mean_gradient(const SdeConfig<double>& cfg, const SamplerOptions& opt) {
  return mean_gradient_impl(cfg, opt, Scheme::mala);
}

MeanGradient<cplx> mean_gradient(const SdeConfig<cplx>& cfg, const SamplerOptions& opt) {
  return mean_gradient_impl(cfg, opt, Scheme::exponential_euler);
}

namespace {

template <class T>
ComplexEstimate thermo_integration_impl(const SdeConfig<T>& cfg, const SamplerOptions& opt,
                                        int gl_nodes) {
  const QuadRule r = map_to(gauss_legendre(gl_nodes), 0.0, 1.0);
  cplx total{};
  double var_re = 0, var_im = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    SdeConfig<T> node_cfg = cfg;
    scale(node_cfg.h, r.nodes[i]);
    SamplerOptions node_opt = opt;
    node_opt.seed = opt.seed + 0x9E3779B97F4A7C15ull * (i + 1);
    ComplexEstimate v = tilted_mean_pairing(node_cfg, cfg.h, node_opt);
    total += r.weights[i] * v.mean;
    var_re += r.weights[i] * r.weights[i] * v.se_re * v.se_re;
    var_im += r.weights[i] * r.weights[i] * v.se_im * v.se_im;
    n += v.n;
  }
  return {total, std::sqrt(var_re), std::sqrt(var_im), n};
}

}  // namespace

ComplexEstimate q_thermo_integration(const SdeConfig<double>& cfg, const SamplerOptions& opt,
                                     int gl_nodes) {
  return thermo_integration_impl(cfg, opt, gl_nodes);
}

ComplexEstimate q_thermo_integration(const SdeConfig<cplx>& cfg, const SamplerOptions& opt,
                                     int gl_nodes) {
  return thermo_integration_impl(cfg, opt, gl_nodes);
}

EstimatorResult exp_moment(const SdeConfig<double>& cfg, const RealVectorField& a,
                           const SamplerOptions& opt) {
  SdeConfig<double> c = cfg;
  c.scheme = Scheme::mala;
  auto series = chain_series(c, opt, [&](const RealScalarField& phi) {
    const double e = -dot(a, gradient(phi)) / cfg.epsilon;
    if (e > 700.0)
      throw std::overflow_error(
          "exp_moment overflow; use the thermodynamic-integration route instead");
    return std::exp(e);
  });
  return merge_chains(series);
}

EstimatorResult exp_moment_centered(const SdeConfig<double>& cfg, const RealVectorField& a,
                                    const SamplerOptions& opt) {
  SdeConfig<double> c = cfg;
  c.scheme = Scheme::mala;
  auto series = chain_series(c, opt, [&](const RealScalarField& phi) {
    return dot(a, gradient(phi));
  });
  double m = 0;
  std::size_t n = 0;
  for (const auto& s : series)
    for (double x : s) {
      m += x;
      ++n;
    }
  m /= static_cast<double>(n);
  const double inv_sqrt_eps = 1.0 / std::sqrt(cfg.epsilon);
  std::vector<std::vector<double>> es(series.size());
  for (std::size_t ch = 0; ch < series.size(); ++ch) {
    es[ch].reserve(series[ch].size());
    for (double x : series[ch]) {
      const double e = inv_sqrt_eps * (x - m);
      if (e > 700.0) throw std::overflow_error("exp_moment_centered overflow");
      es[ch].push_back(std::exp(e));
    }
  }
  return merge_chains(es);
}

std::vector<EstimatorResult> schwinger_dyson_residual(const SdeConfig<double>& cfg,
                                                      const SamplerOptions& opt) {
  SdeConfig<double> c = cfg;
  c.scheme = Scheme::mala;
  const std::size_t burn = c.default_burn_in();
  const std::size_t total = burn + opt.samples_per_chain * opt.thin;
  const std::size_t ns = cfg.lattice().n_sites();
  std::vector<std::vector<double>> site_series(ns);
  for (std::size_t ch = 0; ch < opt.chains; ++ch) {
    auto traj = run_chain(c, total, burn, opt.thin, opt.seed, ch);
    for (const auto& phi : traj.phis) {
      RealScalarField g = drift_standard(phi, c);  // dW/dphi = -2 * drift
      for (std::size_t x = 0; x < ns; ++x) site_series[x].push_back(-2.0 * g.v[x]);
    }
  }
  std::vector<EstimatorResult> out;
  out.reserve(ns);
  for (std::size_t x = 0; x < ns; ++x) out.push_back(batch_means(site_series[x]));
  return out;
}

}  // namespace gfl
