#include "gfl/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace gfl {

struct SpectralCache::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralCache::SpectralCache(const Lattice& lat) : lat_(lat), plans_(new Plans) {
  const int d = lat.dim();
  const int L = lat.side();
  const std::size_t n = lat.n_sites();

  g_.resize(static_cast<std::size_t>(L));
  std::vector<double> s1(static_cast<std::size_t>(L));
  for (int c = 0; c < L; ++c) {
    const double th = 2.0 * M_PI * c / L;
    g_[static_cast<std::size_t>(c)] = cplx(std::cos(th) - 1.0, std::sin(th));
    const double sn = std::sin(M_PI * c / L);
    s1[static_cast<std::size_t>(c)] = 4.0 * sn * sn;
  }
  sym_.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    auto kc = lat_.coords(k);
    double s = 0;
    for (int i = 0; i < d; ++i) s += s1[static_cast<std::size_t>(kc[i])];
    sym_[k] = s;
  }

  std::vector<int> dims(static_cast<std::size_t>(d), L);
  std::vector<cplx> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->fwd = fftw_plan_dft(d, dims.data(), p, p, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->bwd = fftw_plan_dft(d, dims.data(), p, p, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SpectralCache::~SpectralCache() = default;

void SpectralCache::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
}

void SpectralCache::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd, p, p);
  const double inv = 1.0 / static_cast<double>(lat_.n_sites());
  for (std::size_t i = 0; i < lat_.n_sites(); ++i) data[i] *= inv;
}

const SpectralCache& spectral(const Lattice& lat) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SpectralCache>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(lat.dim(), lat.side());
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::make_unique<SpectralCache>(lat)).first;
  return *it->second;
}

}  // namespace gfl
