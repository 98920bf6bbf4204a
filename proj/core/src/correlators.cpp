#include "gfl/correlators.hpp"

#include "gfl/operators.hpp"
#include "gfl/spectral.hpp"
#include "gfl/variations.hpp"

#include <cmath>
#include <stdexcept>

namespace gfl {

RealScalarField green_periodic(int d, int L, double nu) {
  if (!(nu > 0)) throw std::domain_error("green_periodic requires nu > 0");
  Lattice lat(d, L);
  RealScalarField delta(lat);
  delta[0] = 1.0;
  return helmholtz_solve(delta, nu);
}

ZdGreen green_zd(int d, double nu, int window_radius, int max_L) {
  if (!(nu > 0)) throw std::domain_error("green_zd requires nu > 0");
  int L = 16;
  while (L < 4 * window_radius) L *= 2;
  RealScalarField prev = green_periodic(d, L, nu);
  for (;;) {
    const int L2 = 2 * L;
    if (L2 > max_L)
      throw std::runtime_error("green_zd: window too large for error target; increase max_L");
    RealScalarField next = green_periodic(d, L2, nu);
    // compare on the window
    double diff = 0;
    std::vector<int> y(static_cast<std::size_t>(d), -window_radius);
    for (;;) {
      diff = std::max(diff, std::abs(next[next.lat.index(y)] - prev[prev.lat.index(y)]));
      int i = 0;
      while (i < d && ++y[static_cast<std::size_t>(i)] > window_radius)
        y[static_cast<std::size_t>(i++)] = -window_radius;
      if (i == d) break;
    }
    if (diff < 1e-8) return {next, window_radius};
    prev = std::move(next);
    L = L2;
  }
}

RealVectorField dipole_test_function(int d, int L, double nu, std::size_t x) {
  RealScalarField G = green_periodic(d, L, nu);
  RealVectorField gG = gradient(G);
  RealVectorField h(G.lat);
  const Lattice& lat = G.lat;
  for (std::size_t y = 0; y < lat.n_sites(); ++y) {
    // y - x with periodic wraparound
    auto yc = lat.coords(y);
    auto xc = lat.coords(x);
    for (int i = 0; i < d; ++i) yc[static_cast<std::size_t>(i)] -= xc[static_cast<std::size_t>(i)];
    const std::size_t src = lat.index(yc);
    for (int i = 0; i < d; ++i) h.at(y, i) = gG.at(src, i);
  }
  return h;
}

double richardson_nu(const std::vector<double>& nu, const std::vector<double>& values) {
  if (nu.size() != values.size() || nu.size() < 2)
    throw std::invalid_argument("richardson_nu: need matching grids with >= 2 points");
  const std::size_t n = nu.size();
  const double n1 = nu[n - 2], n2 = nu[n - 1];
  const double v1 = values[n - 2], v2 = values[n - 1];
  return v2 + (v2 - v1) * n2 / (n1 - n2);
}

namespace {

double ti_value(const SdeConfig<double>& cfg, const RealVectorField& h,
                const SamplerOptions& opt, std::uint64_t salt, double* se) {
  SdeConfig<double> c = cfg;
  c.h = h;
  SamplerOptions o = opt;
  o.seed = opt.seed + salt;
  ComplexEstimate q = q_thermo_integration(c, o);
  *se = q.se_re;
  return q.mean.real();
}

double cov_formula(double qA, double qB, double qAB, double eps) {
  const double cross = qAB - qA - qB;
  return std::exp(-qA / eps) * std::exp(-qB / eps) * (std::exp(-cross / eps) - 1.0);
}

}  // namespace

ChargeCovariance charge_covariance(const SdeConfig<double>& cfg, std::size_t x, double rho,
                                   const double nu, const SamplerOptions& opt) {
  if (x == 0) throw std::invalid_argument("charge_covariance requires x != 0");
  const Lattice& lat = cfg.lattice();
  RealVectorField hx = dipole_test_function(lat.dim(), lat.side(), nu, x);
  RealVectorField h0 = dipole_test_function(lat.dim(), lat.side(), nu, 0);
  RealVectorField hA = hx;
  scale(hA, -rho);
  RealVectorField hB = h0;
  scale(hB, rho);
  RealVectorField hAB = hA;
  axpy(hAB, 1.0, hB);

  ChargeCovariance out;
  double seA, seB, seAB;
  const double qA = ti_value(cfg, hA, opt, 101, &seA);
  const double qB = ti_value(cfg, hB, opt, 202, &seB);
  const double qAB = ti_value(cfg, hAB, opt, 303, &seAB);
  out.cross = qAB - qA - qB;
  out.cross_se = std::sqrt(seA * seA + seB * seB + seAB * seAB);
  out.mean_x = std::exp(-qA / cfg.epsilon);
  out.mean_0 = std::exp(-qB / cfg.epsilon);
  out.cov = cov_formula(qA, qB, qAB, cfg.epsilon);
  // delta-method SE: perturb each q by its SE
  const double dA = cov_formula(qA + seA, qB, qAB, cfg.epsilon) - out.cov;
  const double dB = cov_formula(qA, qB + seB, qAB, cfg.epsilon) - out.cov;
  const double dAB = cov_formula(qA, qB, qAB + seAB, cfg.epsilon) - out.cov;
  out.se = std::sqrt(dA * dA + dB * dB + dAB * dAB);

  SdeConfig<double> zero = cfg;
  zero.h = RealVectorField(lat);
  EstimatorResult d2 = estimate_d2q_covariance(zero, hA, hB, opt.samples_per_chain * opt.chains,
                                               opt.seed + 404);
  out.d2q_term = d2.mean;
  out.remainder = out.cross - out.d2q_term;
  return out;
}

EstimatorResult d2_increment_moment(const SdeConfig<double>& cfg, std::size_t x, double rho,
                                    double nu, const SamplerOptions& opt) {
  if (x == 0) return {0.0, 0.0, 0.0, 1};  // log of exactly 1
  const Lattice& lat = cfg.lattice();
  RealVectorField hx = dipole_test_function(lat.dim(), lat.side(), nu, x);
  RealVectorField h0 = dipole_test_function(lat.dim(), lat.side(), nu, 0);
  RealVectorField h = hx;
  axpy(h, -1.0, h0);
  scale(h, -rho);
  double se;
  const double q = ti_value(cfg, h, opt, 505, &se);
  // log <exp(rho (phi(x)-phi(0))/eps)> = -dq/eps  (up to the nu regularization)
  return {-q / cfg.epsilon, 0.0, se / cfg.epsilon, opt.chains * opt.samples_per_chain};
}

namespace {

// dense symmetric eigen decomposition (Jacobi, with vectors), n <= 6
void sym_eigen(std::vector<double>& A, std::vector<double>& V, int n) {
  auto at = [&](int i, int j) -> double& { return A[static_cast<std::size_t>(i * n + j)]; };
  auto vt = [&](int i, int j) -> double& { return V[static_cast<std::size_t>(i * n + j)]; };
  V.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) vt(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double th = 0.5 * std::atan2(2.0 * at(p, q), at(q, q) - at(p, p));
        const double c = std::cos(th), s = std::sin(th);
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
          const double vkp = vt(k, p), vkq = vt(k, q);
          vt(k, p) = c * vkp - s * vkq;
          vt(k, q) = s * vkp + c * vkq;
        }
      }
  }
}

// solve square linear system by Gaussian elimination with partial pivoting
std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b, int n) {
  auto at = [&](int i, int j) -> double& { return A[static_cast<std::size_t>(i * n + j)]; };
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(at(r, c)) > std::abs(at(piv, c))) piv = r;
    if (std::abs(at(piv, c)) < 1e-12)
      throw std::runtime_error("estimate_hom_matrix: ill-conditioned small-k fit");
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(at(c, j), at(piv, j));
      std::swap(b[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(piv)]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double f = at(r, c) / at(c, c);
      for (int j = c; j < n; ++j) at(r, j) -= f * at(c, j);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int j = r + 1; j < n; ++j) s -= at(r, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(r)] = s / at(r, r);
  }
  return x;
}

}  // namespace

HomogenizedModel estimate_hom_matrix(const SdeConfig<double>& cfg, const SamplerOptions& opt) {
  const Lattice& lat = cfg.lattice();
  const int d = lat.dim();
  if (cfg.V.kind() == Potential::Kind::gaussian) return {cfg.V.matrix(), true, false};

  // probe frequencies: axes e_i and pairs e_i + e_j (enough rows for the
  // d(d+1)/2 unknowns of a symmetric matrix)
  std::vector<std::vector<int>> ks;
  for (int i = 0; i < d; ++i) {
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    k[static_cast<std::size_t>(i)] = 1;
    ks.push_back(k);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      std::vector<int> k(static_cast<std::size_t>(d), 0);
      k[static_cast<std::size_t>(i)] = 1;
      k[static_cast<std::size_t>(j)] = 1;
      ks.push_back(k);
    }

  const SpectralCache& sc = spectral(lat);
  const int n_unknown = d * (d + 1) / 2;
  std::vector<double> rows, rhs;
  SdeConfig<double> zero = cfg;
  zero.h = RealVectorField(lat);
  zero.scheme = Scheme::mala;
  const std::size_t burn = zero.default_burn_in();
  for (std::size_t pk = 0; pk < ks.size(); ++pk) {
    const auto& k = ks[pk];
    RealVectorField a(lat);
    for (std::size_t x = 0; x < lat.n_sites(); ++x) {
      auto xc = lat.coords(x);
      double ph = 0;
      for (int i = 0; i < d; ++i) ph += static_cast<double>(k[static_cast<std::size_t>(i)] * xc[static_cast<std::size_t>(i)]);
      const double c = std::cos(2.0 * M_PI * ph / lat.side());
      for (int i = 0; i < d; ++i) a.at(x, i) = c;
    }
    // model value for B = I fixes the B-independent numerator
    const double sigma_I = [&] {
      double s = 0;
      for (int i = 0; i < d; ++i) s += std::norm(sc.g(k[static_cast<std::size_t>(i)]));
      return s;
    }();
    const double P = green_form(a, 1.0, cfg.m2) * (sigma_I + cfg.m2);
    // measured variance
    std::vector<double> chain_vars(opt.chains);
    for (std::size_t ch = 0; ch < opt.chains; ++ch) {
      auto traj = run_chain(zero, burn + opt.samples_per_chain * opt.thin, burn, opt.thin,
                            opt.seed + 7000 + pk, ch);
      std::vector<double> s;
      s.reserve(traj.phis.size());
      for (const auto& phi : traj.phis) s.push_back(dot(a, gradient(phi)));
      chain_vars[ch] = variance_estimate(s).mean;
    }
    const double v = summarize(chain_vars).mean / cfg.epsilon;
    const double sigma_B = P / v - cfg.m2;
    // row: sigma_B(k) = sum_i B_ii |g_i|^2 + sum_{i<j} B_ij 2 Re(conj(g_i) g_j)
    std::vector<double> row(static_cast<std::size_t>(n_unknown), 0.0);
    int col = 0;
    for (int i = 0; i < d; ++i)
      row[static_cast<std::size_t>(col++)] = std::norm(sc.g(k[static_cast<std::size_t>(i)]));
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        row[static_cast<std::size_t>(col++)] =
            2.0 * (std::conj(sc.g(k[static_cast<std::size_t>(i)])) * sc.g(k[static_cast<std::size_t>(j)])).real();
    rows.insert(rows.end(), row.begin(), row.end());
    rhs.push_back(sigma_B);
  }

  std::vector<double> sol = solve_linear(rows, rhs, n_unknown);
  std::vector<double> B(static_cast<std::size_t>(d * d), 0.0);
  int col = 0;
  for (int i = 0; i < d; ++i) B[static_cast<std::size_t>(i * d + i)] = sol[static_cast<std::size_t>(col++)];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      B[static_cast<std::size_t>(i * d + j)] = sol[static_cast<std::size_t>(col)];
      B[static_cast<std::size_t>(j * d + i)] = sol[static_cast<std::size_t>(col++)];
    }

  // clip spectrum into [lambda, Lambda]
  std::vector<double> Acopy = B, V;
  sym_eigen(Acopy, V, d);
  bool clipped = false;
  std::vector<double> ev(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    double e = Acopy[static_cast<std::size_t>(i * d + i)];
    if (e < cfg.V.lambda()) {
      e = cfg.V.lambda();
      clipped = true;
    }
    if (e > cfg.V.Lambda()) {
      e = cfg.V.Lambda();
      clipped = true;
    }
    ev[static_cast<std::size_t>(i)] = e;
  }
  if (clipped) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int r = 0; r < d; ++r)
          s += V[static_cast<std::size_t>(i * d + r)] * ev[static_cast<std::size_t>(r)] *
               V[static_cast<std::size_t>(j * d + r)];
        B[static_cast<std::size_t>(i * d + j)] = s;
      }
  }
  return {B, false, clipped};
}

}  // namespace gfl
