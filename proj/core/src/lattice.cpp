#include "gfl/lattice.hpp"
#include "gfl/operators.hpp"

// Geometry and the difference operators are header-only templates; this
// translation unit exists to give the headers a standalone compile check.

namespace gfl {

template VectorField<double> gradient(const ScalarField<double>&);
template VectorField<cplx> gradient(const ScalarField<cplx>&);
template ScalarField<double> divergence(const VectorField<double>&);
template ScalarField<cplx> divergence(const VectorField<cplx>&);

}  // namespace gfl
