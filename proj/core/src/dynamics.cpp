#include "gfl/dynamics.hpp"

namespace gfl {

template ScalarField<double> drift_standard(const ScalarField<double>&, const SdeConfig<double>&);
template ScalarField<double> drift_preconditioned(const ScalarField<double>&, const SdeConfig<double>&);
template ScalarField<cplx> drift_preconditioned(const ScalarField<cplx>&, const SdeConfig<cplx>&);
template void step(ChainState<double>&, const SdeConfig<double>&);
template void step(ChainState<cplx>&, const SdeConfig<cplx>&);
template Trajectory<double> run_chain(const SdeConfig<double>&, std::size_t, std::size_t,
                                      std::size_t, std::uint64_t, std::uint64_t,
                                      const std::optional<ScalarField<double>>&);
template Trajectory<cplx> run_chain(const SdeConfig<cplx>&, std::size_t, std::size_t,
                                    std::size_t, std::uint64_t, std::uint64_t,
                                    const std::optional<ScalarField<cplx>>&);

}  // namespace gfl
