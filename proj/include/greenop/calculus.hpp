#pragma once

#include <vector>

#include "greenop/field.hpp"

namespace greenop {

// Spectral derivatives. gradient and divergence are exact negative adjoints in
// the discrete pairing: <grad u, F> = -<u, div F>.
std::vector<Field> gradient(const Field& u);
Field divergence(const std::vector<Field>& F);
Field laplacian(const Field& u);
// d/dt with symbol i tau.
Field time_derivative(const Field& u);
// Multi-index derivative d^alpha in space; alpha has n entries.
Field partial(const Field& u, const std::vector<int>& alpha);
// (-Delta)^{m/2}: the magnitude of the full m-th order gradient tensor.
Field gradient_power(const Field& u, int m);

std::vector<SpatialField> gradient(const SpatialField& u);
SpatialField divergence(const std::vector<SpatialField>& F);

// i xi_c in transform order for every spatial index.
std::vector<cplx> derivative_symbol(const SpaceTimeGrid& g, int c);

}  // namespace greenop
