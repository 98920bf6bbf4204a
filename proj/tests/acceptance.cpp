// Acceptance gate: every release-blocking numeric property in one binary,
// one PASS/FAIL line per criterion, pinned tolerances. Exit code = number
// of failed criteria.
#include "gfl/bounds.hpp"
#include "gfl/correlators.hpp"
#include "gfl/quadrature.hpp"
#include "gfl/variations.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace gfl;

namespace {

RealVectorField random_vector(const Lattice& lat, std::uint64_t seed, double norm) {
  Rng rng(seed, 1);
  RealVectorField F(lat);
  for (auto& x : F.v) x = rng.next_normal();
  const double n = norm2(F);
  if (n > 0) scale(F, norm / n);
  return F;
}

RealScalarField random_scalar(const Lattice& lat, std::uint64_t seed, double norm) {
  Rng rng(seed, 0);
  RealScalarField f(lat);
  for (auto& x : f.v) x = rng.next_normal();
  const double n = norm2(f);
  if (n > 0) scale(f, norm / n);
  return f;
}

std::vector<double> identity(int d, double alpha) {
  std::vector<double> A(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(i * d + i)] = alpha;
  return A;
}

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(std::abs(ys[i]));
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (std::log(xs[i]) - mx) * (std::log(std::abs(ys[i])) - my);
    den += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
  }
  return num / den;
}

// --- criterion 1: exact gaussian variance calibration -----------------------

bool criterion_variance_calibration(std::string& detail) {
  bool ok = true;
  double worst_z = 0;
  for (double alpha : {0.5, 1.0}) {
    Lattice lat(2, 8);
    SdeConfig<double> cfg{Potential::gaussian(2, identity(2, alpha)), RealVectorField(lat), 1.0,
                          0.5, 0.0, Scheme::mala, STRIP_INFINITE};
    const std::size_t chains = 8, samples = 1200, thin = 10;
    const std::size_t burn = cfg.default_burn_in();
    std::vector<RealVectorField> dirs;
    for (int i = 0; i < 10; ++i) dirs.push_back(random_vector(lat, 100 + static_cast<std::uint64_t>(i), 1.0));
    std::vector<std::vector<double>> chain_vars(dirs.size());
    for (std::size_t ch = 0; ch < chains; ++ch) {
      auto traj = run_chain(cfg, burn + samples * thin, burn, thin, 42, ch);
      std::vector<std::vector<double>> series(dirs.size());
      for (const auto& phi : traj.phis) {
        RealVectorField w = gradient(phi);
        for (std::size_t i = 0; i < dirs.size(); ++i) series[i].push_back(dot(dirs[i], w));
      }
      for (std::size_t i = 0; i < dirs.size(); ++i)
        chain_vars[i].push_back(variance_estimate(series[i]).mean);
    }
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      EstimatorResult r = summarize(chain_vars[i]);
      const double exact = green_form(dirs[i], alpha, cfg.m2) * cfg.epsilon;
      const double z = std::abs(r.mean - exact) / r.se;
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 3.0;
    }
  }
  std::ostringstream os;
  os << "2 couplings x 10 directions, worst |z| = " << worst_z << " (limit 3)";
  detail = os.str();
  return ok;
}

// --- criterion 2: sampler against tiny-lattice quadrature -------------------

bool criterion_oracle_equivalence(std::string& detail) {
  bool ok = true;
  double worst = 0;  // |diff| / tolerance
  int n_cases = 0;
  for (int d : {1, 2})
    for (double a : {0.0, 0.3, 0.6})
      for (double m2 : {0.5, 1.0}) {
        Lattice lat(d, 2);
        Potential V = Potential::dipole(d, a);
        for (int k = 0; k < 5; ++k) {
          RealVectorField h =
              random_vector(lat, 1000 + static_cast<std::uint64_t>(100 * d + 10 * k) +
                                     static_cast<std::uint64_t>(a * 10),
                            0.5);
          SdeConfig<double> cfg{V, h, 1.0, m2, 0.0, Scheme::mala, STRIP_INFINITE};
          SamplerOptions opt;
          opt.chains = 16;
          opt.samples_per_chain = 1500;
          opt.thin = 8;
          opt.seed = 7 + static_cast<std::uint64_t>(k);
          ComplexEstimate ti = q_thermo_integration(cfg, opt);
          const double bf = q_brute_force(V, m2, cfg.epsilon, h);  // 32 vs 48 checked inside
          const double tol = std::max(3.0 * ti.se_re, 1e-3);
          worst = std::max(worst, std::abs(ti.mean.real() - bf) / tol);
          ok = ok && std::abs(ti.mean.real() - bf) <= tol;
          ++n_cases;
        }
      }
  std::ostringstream os;
  os << n_cases << " configs, worst |diff|/tol = " << worst
     << " (tol = max(3 se, 1e-3); node self-check 1e-6 enforced inside)";
  detail = os.str();
  return ok;
}

// --- criterion 3: real free-energy sandwich ---------------------------------

bool criterion_real_sandwich(std::string& detail) {
  Lattice lat(2, 8);
  Potential V = Potential::dipole(2, 0.5);
  bool ok = true;
  double worst_margin = 1e9;
  for (int k = 0; k < 10; ++k) {
    const double norm = 0.1 + 0.09 * k;  // spread over (0, 1]
    SdeConfig<double> cfg{V, random_vector(lat, 300 + static_cast<std::uint64_t>(k), norm), 1.0,
                          0.5, 0.0, Scheme::mala, STRIP_INFINITE};
    SamplerOptions opt;
    opt.chains = 4;
    opt.samples_per_chain = 1000;
    opt.thin = 5;
    opt.seed = 11 + static_cast<std::uint64_t>(k);
    for (const auto& c : check_q_sandwich(cfg, opt)) {
      worst_margin = std::min(worst_margin, c.margin);
      ok = ok && c.verdict == "PASS";
    }
  }
  std::ostringstream os;
  os << "10 tilts with ||h|| <= 1, both bounds at 3 se, worst margin = " << worst_margin;
  detail = os.str();
  return ok;
}

// --- criterion 4: complex-tilt bounds and their admissibility gate ----------

bool criterion_complex_bounds(std::string& detail) {
  Lattice lat(2, 8);
  Potential V = Potential::dipole(2, 0.3);
  const double eta = 0.05;
  const double lc = V.lambda_c();
  const double im_norm = 0.5 * (lc - eta) * V.strip_constants(eta).delta_eta;
  bool ok = true;
  double worst_margin = 1e9;
  for (int k = 0; k < 5; ++k) {
    ComplexVectorField h =
        complexify(random_vector(lat, 400 + static_cast<std::uint64_t>(k), 0.5),
                   random_vector(lat, 450 + static_cast<std::uint64_t>(k), im_norm));
    SdeConfig<cplx> cfg{V, h, 1.0, 0.5, 0.0, Scheme::exponential_euler, STRIP_INFINITE};
    SamplerOptions opt;
    opt.chains = 4;
    opt.samples_per_chain = 800;
    opt.thin = 5;
    opt.seed = 21 + static_cast<std::uint64_t>(k);
    for (const auto& c : check_complex_bounds(cfg, eta, opt)) {
      if (c.name != "strip-upper" && c.name != "strip-lower") continue;
      worst_margin = std::min(worst_margin, c.margin);
      ok = ok && c.verdict == "PASS";
    }
  }
  // vacuity gate: large eta must downgrade the lower bound to SKIPPED
  {
    Lattice small(1, 2);
    ComplexVectorField h = complexify(random_vector(small, 460, 0.3),
                                      random_vector(small, 461, 1e-3));
    SdeConfig<cplx> cfg{Potential::dipole(1, 0.3), h, 1.0, 1.0, 0.0, Scheme::exponential_euler,
                        STRIP_INFINITE};
    SamplerOptions opt;
    opt.chains = 2;
    opt.samples_per_chain = 100;
    opt.thin = 2;
    bool gate = false;
    for (const auto& c : check_complex_bounds(cfg, 0.45, opt))
      if (c.name == "strip-lower")
        gate = c.verdict == "SKIPPED" && c.note.find("vacuous") != std::string::npos;
    ok = ok && gate;
  }
  std::ostringstream os;
  os << "5 phases, ||Im h|| = " << im_norm << ", worst margin = " << worst_margin
     << "; vacuity gate verified";
  detail = os.str();
  return ok;
}

// --- criterion 5: cubic remainder bound and its scaling ----------------------

// expectation of [h, grad phi]^2 at zero tilt on the 2-site chain, by the
// same substitution the partition-function quadrature uses
double second_moment_quadrature(const Potential& V, double m2, double eps,
                                const RealVectorField& h, int nodes) {
  QuadRule r = gauss_hermite(nodes);
  const double c = std::sqrt(2.0 * eps / m2);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    for (std::size_t j = 0; j < r.nodes.size(); ++j) {
      const double p0 = c * r.nodes[i], p1 = c * r.nodes[j];
      const double w0 = p1 - p0, w1 = p0 - p1;
      const double vsum = V.value(&w0) + V.value(&w1);
      const double weight = r.weights[i] * r.weights[j] * std::exp(-vsum / eps);
      const double X = h.v[0] * w0 + h.v[1] * w1;
      num += weight * X * X;
      den += weight;
    }
  return num / den;
}

bool criterion_cubic_remainder(std::string& detail) {
  Lattice lat(1, 2);
  Potential V = Potential::dipole(1, 0.3);
  const double m2 = 1.0, eps = 1.0;
  RealVectorField u = random_vector(lat, 500, 1.0);
  const double x2_32 = second_moment_quadrature(V, m2, eps, u, 32);
  const double x2_48 = second_moment_quadrature(V, m2, eps, u, 48);
  bool ok = std::abs(x2_32 - x2_48) <= 1e-8;

  const double M = V.strip_constants(1e-3).M;
  const double lc = V.lambda_c();
  std::vector<double> norms{0.25, 0.5, 1.0}, lhs;
  for (double s : norms) {
    RealVectorField h = u;
    scale(h, s);
    const double q = q_brute_force(V, m2, eps, h);
    const double rem = std::abs(q + s * s * x2_48 / (2.0 * eps));
    const double bound = M * s * s * s / (6.0 * lc * lc * lc);
    ok = ok && rem <= bound;
    lhs.push_back(rem);
  }
  const double slope = loglog_slope(norms, lhs);
  const bool slope_ok = std::abs(slope - 3.0) <= 0.3;
  std::ostringstream os;
  os << "bound holds at all norms (quadrature-exact); fitted scaling exponent = " << slope
     << " (required 3 +- 0.3" << (slope_ok ? ")" : "; the even potential makes the true "
        "remainder quartic, so the cubic exponent target cannot be met)");
  detail = os.str();
  return ok && slope_ok;
}

// --- criterion 6: derivative cross-checks ------------------------------------

bool criterion_derivative_crosschecks(std::string& detail) {
  std::ostringstream os;
  bool ok = true;

  {  // second derivative: pathwise flow vs covariance form
    Lattice lat(1, 4);
    SdeConfig<double> cfg{Potential::dipole(1, 0.3), RealVectorField(lat), 1.0, 1.0, 0.0,
                          Scheme::exponential_euler, STRIP_INFINITE};
    RealVectorField a1 = random_vector(lat, 600, 1.0);
    RealVectorField a2 = random_vector(lat, 601, 1.0);
    FlowOptions fopt;
    fopt.chains = 64;
    fopt.seed = 31;
    EstimatorResult path = estimate_d2q_pathwise(cfg, a1, a2, fopt);
    EstimatorResult cov = estimate_d2q_covariance(cfg, a1, a2, 60000, 32);
    const double z = std::abs(path.mean - cov.mean) / combined_se(path, cov);
    ok = ok && z <= 3.0;
    os << "d2q pathwise vs covariance |z| = " << z;
  }

  {  // third derivative vs quadrature finite differences at a nonzero base
    Lattice lat(1, 2);
    Potential V = Potential::dipole(1, 0.5);
    RealVectorField h0 = random_vector(lat, 610, 0.6);
    RealVectorField a = random_vector(lat, 611, 1.0);
    SdeConfig<double> cfg{V, h0, 1.0, 1.0, 0.0, Scheme::exponential_euler, STRIP_INFINITE};
    FlowOptions fopt;
    fopt.chains = 96;
    fopt.seed = 33;
    EstimatorResult d3 = estimate_d3q(cfg, a, a, a, fopt);
    const double s = 0.1;
    auto g = [&](double t) {
      RealVectorField h = h0;
      axpy(h, t, a);
      return q_brute_force(V, 1.0, 1.0, h);
    };
    const double fd = (g(2 * s) - 2 * g(s) + 2 * g(-s) - g(-2 * s)) / (2 * s * s * s);
    const double tol = std::max(1e-2, 3.0 * d3.se);
    ok = ok && std::abs(d3.mean - fd) <= tol;
    os << "; d3q vs quadrature fd |diff| = " << std::abs(d3.mean - fd) << " (tol " << tol << ")";
  }

  {  // flows vs common-random-number finite differences
    Lattice lat(1, 2);
    const double m2 = 1.0, dt = 1e-4;
    const std::size_t steps = 20000;
    Potential V = Potential::dipole(1, 0.4);
    SdeConfig<double> base{V, random_vector(lat, 620, 0.3), 1.0, m2, dt,
                           Scheme::exponential_euler, STRIP_INFINITE};
    RealVectorField a = random_vector(lat, 621, 1.0);
    auto omega = trajectory_omegas(base, steps, 35);
    VariationFlow<double> f1 = solve_first_variation(omega, dt, m2, V, a);
    VariationFlow<double> f2 = solve_second_variation(omega, dt, m2, V, f1, f1);
    const double s1 = 1e-4, s2 = 5e-3;
    auto shifted = [&](double s) {
      SdeConfig<double> c = base;
      axpy(c.h, s, a);
      return trajectory_omegas(c, steps, 35);
    };
    auto wp1 = shifted(s1), wm1 = shifted(-s1);
    auto wp2 = shifted(s2), wm2 = shifted(-s2);
    double e1 = 0, n1 = 0, e2 = 0, n2 = 0;
    for (std::size_t j = 0; j <= steps; j += 50) {
      RealVectorField fd1 = wp1[j];
      axpy(fd1, -1.0, wm1[j]);
      scale(fd1, 1.0 / (2 * s1));
      RealVectorField d1 = f1.f[j];
      axpy(d1, -1.0, fd1);
      e1 = std::max(e1, norm2(d1));
      n1 = std::max(n1, norm2(fd1));
      RealVectorField fd2 = wp2[j];
      axpy(fd2, -2.0, omega[j]);
      axpy(fd2, 1.0, wm2[j]);
      scale(fd2, 1.0 / (s2 * s2));
      RealVectorField d2 = f2.f[j];
      axpy(d2, -1.0, fd2);
      e2 = std::max(e2, norm2(d2));
      n2 = std::max(n2, norm2(fd2));
    }
    ok = ok && e1 / n1 <= 1e-3 && e2 / n2 <= 1e-2;
    os << "; flow vs crn fd rel errors = " << e1 / n1 << " / " << e2 / n2
       << " (limits 1e-3 / 1e-2)";
  }
  detail = os.str();
  return ok;
}

// --- criterion 7: coupling contraction rate ----------------------------------

bool criterion_contraction(std::string& detail) {
  Lattice lat(2, 8);
  Potential V = Potential::dipole(2, 0.5);
  const double lambda = V.lambda();
  const double T = 4.0 / lambda, dt = 1e-3;
  const std::size_t steps = static_cast<std::size_t>(std::lround(T / dt));
  SdeConfig<double> cfg{V, RealVectorField(lat), 1.0, 0.5, dt, Scheme::exponential_euler,
                        STRIP_INFINITE};
  const double limit = std::exp(-lambda * T / 2.0) * 1.1;
  double worst = 0;
  for (std::uint64_t pair = 0; pair < 20; ++pair) {
    ChainState<double> a{random_scalar(lat, 700 + 2 * pair, 1.0), 0.0, Rng(900 + pair, 0)};
    ChainState<double> b{random_scalar(lat, 701 + 2 * pair, 1.0), 0.0, Rng(900 + pair, 0)};
    RealScalarField d0 = a.phi;
    axpy(d0, -1.0, b.phi);
    const double start = norm2(d0);
    for (std::size_t s = 0; s < steps; ++s) {
      step(a, cfg);
      step(b, cfg);
    }
    RealScalarField dT = a.phi;
    axpy(dT, -1.0, b.phi);
    worst = std::max(worst, norm2(dT) / start);
  }
  std::ostringstream os;
  os << "20 coupled pairs, worst factor = " << worst << " (limit " << limit << ")";
  detail = os.str();
  return worst <= limit;
}

// --- criterion 8: l2 norm of the gradient projection --------------------------

bool criterion_projection_norm(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int d : {2, 3})
    for (int L : {8, 16, 32, 64}) {
      Lattice lat(d, L);
      const int probes = L >= 64 ? 2 : 3;
      worst = std::max(worst, estimate_kappa_p(lat, 0.5, 2.0, probes).kappa_p_lower);
    }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << "max estimate over d in {2,3}, L <= 64: " << worst << " (limit 1 + 1e-9), " << secs
     << " s (limit 30)";
  detail = os.str();
  return worst <= 1.0 + 1e-9 && secs <= 30.0;
}

// --- criterion 9: green-function and test-function identities ----------------

bool criterion_green_identities(std::string& detail) {
  bool ok = true;
  std::ostringstream os;

  {  // pairing identity
    const int d = 2, L = 6;
    Lattice lat(d, L);
    double worst = 0;
    for (double nu : {0.5, 0.25}) {
      RealScalarField phi = random_scalar(lat, 910, 1.0);
      RealScalarField G = green_periodic(d, L, nu);
      const std::size_t x = lat.index({2, 3});
      RealVectorField h = dipole_test_function(d, L, nu, x);
      double smear = 0;
      for (std::size_t y = 0; y < lat.n_sites(); ++y) {
        auto yc = lat.coords(y);
        yc[0] -= 2;
        yc[1] -= 3;
        smear += G[lat.index(yc)] * phi[y];
      }
      worst = std::max(worst, std::abs(dot(h, gradient(phi)) - (phi[x] - nu * smear)));
    }
    ok = ok && worst <= 1e-8;
    os << "pairing identity residual = " << worst << " (limit 1e-8)";
  }

  {  // periodization as a wrapped sum
    const int d = 2, L = 8;
    const double nu = 1.0;
    RealScalarField GL = green_periodic(d, L, nu);
    ZdGreen zd = green_zd(d, nu, L / 2 + 2 * L);
    double worst = 0;
    for (std::size_t y = 0; y < GL.lat.n_sites(); ++y) {
      auto yc = GL.lat.coords(y);
      for (auto& c : yc)
        if (c >= L / 2) c -= L;
      double wrapped = 0;
      for (int n0 = -2; n0 <= 2; ++n0)
        for (int n1 = -2; n1 <= 2; ++n1)
          wrapped += zd.G[zd.G.lat.index({yc[0] + n0 * L, yc[1] + n1 * L})];
      worst = std::max(worst, std::abs(GL[y] - wrapped));
    }
    ok = ok && worst <= 1e-6;
    os << "; wrapped-sum residual = " << worst << " (limit 1e-6)";
  }

  {  // decay-constant stability of the test function envelope
    const int d = 2, R = 6;
    std::vector<double> cs;
    for (double nu : {0.5, 0.35, 0.25}) {
      ZdGreen zd = green_zd(d, nu, R);
      RealVectorField h = gradient(zd.G);
      double C = 0;
      for (int y0 = -R; y0 <= R; ++y0)
        for (int y1 = -R; y1 <= R; ++y1) {
          const double r = std::sqrt(double(y0 * y0 + y1 * y1));
          C = std::max(C, site_abs(h, h.lat.index({y0, y1})) * (r + 1.0));
        }
      cs.push_back(C);
    }
    const double spread = *std::max_element(cs.begin(), cs.end()) /
                          *std::min_element(cs.begin(), cs.end()) - 1.0;
    ok = ok && spread <= 0.20;
    os << "; decay-constant spread over the nu grid = " << spread * 100 << "% (limit 20%)";
  }
  detail = os.str();
  return ok;
}

// --- criterion 10: charge correlations ----------------------------------------

bool criterion_charge_correlations(std::string& detail) {
  bool ok = true;
  std::ostringstream os;

  {  // gaussian closed form, d = 2, L = 16
    const int d = 2, L = 16;
    const double m2 = 0.5, nu = 0.3, rho = 0.8;
    Lattice lat(d, L);
    Potential V = Potential::gaussian(d, identity(d, 1.0));
    SdeConfig<double> cfg{V, RealVectorField(lat), 1.0, m2, 0.0, Scheme::mala, STRIP_INFINITE};
    SamplerOptions opt;
    opt.chains = 4;
    opt.samples_per_chain = 600;
    opt.thin = 5;
    opt.seed = 51;
    const std::size_t x = lat.index({4, 0});
    ChargeCovariance cc = charge_covariance(cfg, x, rho, nu, opt);
    RealVectorField hA = dipole_test_function(d, L, nu, x);
    scale(hA, -rho);
    RealVectorField hB = dipole_test_function(d, L, nu, 0);
    scale(hB, rho);
    RealVectorField hAB = hA;
    axpy(hAB, 1.0, hB);
    const double qA = gaussian_q_exact(V, m2, hA), qB = gaussian_q_exact(V, m2, hB);
    const double cross = gaussian_q_exact(V, m2, hAB) - qA - qB;
    const double cov = std::exp(-qA) * std::exp(-qB) * (std::exp(-cross) - 1.0);
    const double z = std::abs(cc.cov - cov) / cc.se;
    ok = ok && z <= 3.0;
    os << "gaussian closed form |z| = " << z;
  }

  double slope = 0;
  {  // dipole remainder scaling by quadrature on the 2-site chain
    const int d = 1, L = 2;
    const double m2 = 1.0, nu = 0.4;
    Potential V = Potential::dipole(d, 0.3);
    RealVectorField h1 = dipole_test_function(d, L, nu, 1);
    RealVectorField h0 = dipole_test_function(d, L, nu, 0);
    auto qbf = [&](const RealVectorField& h) { return q_brute_force(V, m2, 1.0, h); };
    // exact second derivative by richardson-extrapolated quadrature differences
    auto d2_diag = [&](const RealVectorField& w) {
      auto A = [&](double s) {
        RealVectorField sw = w;
        scale(sw, s);
        return 2.0 * qbf(sw) / (s * s);
      };
      const double s = 0.02;
      return (4.0 * A(s) - A(2 * s)) / 3.0;
    };
    RealVectorField sum = h1;
    axpy(sum, 1.0, h0);
    const double d2_cross = 0.5 * (d2_diag(sum) - d2_diag(h1) - d2_diag(h0));
    std::vector<double> rhos{0.4, 0.6, 0.9}, rems;
    for (double rho : rhos) {
      RealVectorField hA = h1, hB = h0;
      scale(hA, -rho);
      scale(hB, rho);
      RealVectorField hAB = hA;
      axpy(hAB, 1.0, hB);
      const double cross = qbf(hAB) - qbf(hA) - qbf(hB);
      rems.push_back(cross - (-rho * rho) * d2_cross);
    }
    slope = loglog_slope(rhos, rems);
    ok = ok && std::abs(slope - 3.0) <= 0.4;
    os << "; remainder scaling exponent = " << slope << " (required 3 +- 0.4"
       << (std::abs(slope - 3.0) <= 0.4
               ? ")"
               : "; the even potential makes the remainder quartic in the charge, so the "
                 "cubic exponent target cannot be met)");
  }

  {  // d = 2 log-moment regression against the green-function increment
    const int d = 2, L = 8;
    const double m2 = 0.25, nu = m2;
    Lattice lat(d, L);
    SdeConfig<double> cfg{Potential::dipole(d, 0.3), RealVectorField(lat), 1.0, m2, 0.0,
                          Scheme::mala, STRIP_INFINITE};
    SamplerOptions opt;
    opt.chains = 4;
    opt.samples_per_chain = 600;
    opt.thin = 5;
    opt.seed = 53;
    RealScalarField G = green_periodic(d, L, nu);
    std::vector<double> xs, ys;
    for (int sep : {1, 2, 3})
      for (double rho : {0.4, 0.8}) {
        const std::size_t x = lat.index({sep, 0});
        EstimatorResult r = d2_increment_moment(cfg, x, rho, nu, opt);
        xs.push_back(rho * rho * (G[0] - G[x]) / cfg.epsilon);
        ys.push_back(r.mean);
      }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += xs[i] * ys[i];
      den += xs[i] * xs[i];
    }
    const double beta = num / den;
    double worst = 0, scale_y = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      worst = std::max(worst, std::abs(ys[i] - beta * xs[i]));
      scale_y = std::max(scale_y, std::abs(ys[i]));
    }
    ok = ok && worst <= 0.25 * scale_y;
    os << "; log-moment regression max residual = " << worst << " (limit 25% of "
       << scale_y << ")";
  }
  detail = os.str();
  return ok;
}

struct Criterion {
  const char* title;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"gaussian variance calibration against the closed form", criterion_variance_calibration},
      {"sampler free energies match tiny-lattice quadrature", criterion_oracle_equivalence},
      {"real free-energy sandwich between convexity bounds", criterion_real_sandwich},
      {"complex-tilt bounds with admissibility gating", criterion_complex_bounds},
      {"cubic remainder bound and scaling", criterion_cubic_remainder},
      {"derivative estimators cross-check", criterion_derivative_crosschecks},
      {"coupling contraction at the convexity rate", criterion_contraction},
      {"l2 gradient-projection norm at most one", criterion_projection_norm},
      {"green-function and test-function identities", criterion_green_identities},
      {"charge correlation closed form, scaling, and regression", criterion_charge_correlations},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!pass) ++failures;
    std::printf("[%s] criterion %zu: %s — %s\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].title, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
              criteria.size());
  return failures;
}
