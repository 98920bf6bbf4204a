#include "gfl/variations.hpp"

namespace gfl {

EstimatorResult estimate_d2q_pathwise(const SdeConfig<double>& cfg, const RealVectorField& a1,
                                      const RealVectorField& a2, const FlowOptions& opt) {
  const std::size_t steps = flow_steps(cfg, opt.horizon);
  std::vector<double> samples(opt.chains);
  for (std::size_t c = 0; c < opt.chains; ++c) {
    auto omega = trajectory_omegas(cfg, steps, opt.seed, c);
    auto flow = solve_first_variation(omega, cfg.step_size(), cfg.m2, cfg.V, a2);
    samples[c] = dot(a1, flow.f.back());
  }
  return summarize(samples);
}

EstimatorResult estimate_d2q_covariance(const SdeConfig<double>& cfg, const RealVectorField& a1,
                                        const RealVectorField& a2, std::size_t n_samples,
                                        std::uint64_t seed) {
  SdeConfig<double> mcfg = cfg;
  mcfg.scheme = Scheme::mala;
  const std::size_t burn = mcfg.default_burn_in();
  auto traj = run_chain(mcfg, burn + n_samples, burn, 1, seed);
  std::vector<double> xs(traj.phis.size()), ys(traj.phis.size());
  for (std::size_t i = 0; i < traj.phis.size(); ++i) {
    auto w = gradient(traj.phis[i]);
    xs[i] = dot(a1, w);
    ys[i] = dot(a2, w);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  std::vector<double> prod(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    prod[i] = -(xs[i] - mx) * (ys[i] - my) / cfg.epsilon;
  return batch_means(prod);
}

EstimatorResult estimate_d3q(const SdeConfig<double>& cfg, const RealVectorField& a1,
                             const RealVectorField& a2, const RealVectorField& a3,
                             const FlowOptions& opt) {
  const std::size_t steps = flow_steps(cfg, opt.horizon);
  std::vector<double> samples(opt.chains);
  for (std::size_t c = 0; c < opt.chains; ++c) {
    auto omega = trajectory_omegas(cfg, steps, opt.seed, c);
    auto f2 = solve_first_variation(omega, cfg.step_size(), cfg.m2, cfg.V, a2);
    auto f3 = solve_first_variation(omega, cfg.step_size(), cfg.m2, cfg.V, a3);
    auto g = solve_second_variation(omega, cfg.step_size(), cfg.m2, cfg.V, f2, f3);
    samples[c] = dot(a1, g.f.back());
  }
  return summarize(samples);
}

template VariationFlow<double> solve_first_variation(const std::vector<RealVectorField>&, double,
                                                     double, const Potential&,
                                                     const RealVectorField&);
template VariationFlow<cplx> solve_first_variation(const std::vector<ComplexVectorField>&, double,
                                                   double, const Potential&,
                                                   const ComplexVectorField&);
template VariationFlow<double> solve_second_variation(const std::vector<RealVectorField>&, double,
                                                      double, const Potential&,
                                                      const VariationFlow<double>&,
                                                      const VariationFlow<double>&);

}  // namespace gfl
