#include "gfl/dynamics.hpp"
#include "gfl/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace gfl;

namespace {

RealScalarField random_scalar(const Lattice& lat, std::uint64_t seed) {
  Rng rng(seed, 0);
  RealScalarField f(lat);
  for (auto& x : f.v) x = rng.next_normal();
  return f;
}

void bm_helmholtz_solve(benchmark::State& state) {
  Lattice lat(2, static_cast<int>(state.range(0)));
  RealScalarField f = random_scalar(lat, 1);
  for (auto _ : state) benchmark::DoNotOptimize(helmholtz_solve(f, 0.5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(lat.n_sites()));
}
BENCHMARK(bm_helmholtz_solve)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void bm_cz_apply(benchmark::State& state) {
  Lattice lat(2, static_cast<int>(state.range(0)));
  RealVectorField F = gradient(random_scalar(lat, 2));
  for (auto _ : state) benchmark::DoNotOptimize(cz_apply(F, 0.5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(lat.n_sites()));
}
BENCHMARK(bm_cz_apply)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

template <Scheme S>
void bm_step(benchmark::State& state) {
  Lattice lat(2, static_cast<int>(state.range(0)));
  SdeConfig<double> cfg{Potential::dipole(2, 0.5), RealVectorField(lat), 1.0, 0.5, 0.0, S,
                        STRIP_INFINITE};
  ChainState<double> st{RealScalarField(lat), 0.0, Rng(1, 0)};
  for (auto _ : state) step(st, cfg);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(lat.n_sites()));
}
BENCHMARK(bm_step<Scheme::exponential_euler>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_step<Scheme::mala>)->Arg(8)->Arg(16)->Arg(32);

void bm_green_form(benchmark::State& state) {
  Lattice lat(2, static_cast<int>(state.range(0)));
  RealVectorField a = gradient(random_scalar(lat, 3));
  for (auto _ : state) benchmark::DoNotOptimize(green_form(a, 1.0, 0.5));
}
BENCHMARK(bm_green_form)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
