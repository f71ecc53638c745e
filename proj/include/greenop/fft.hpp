#pragma once

#include "greenop/field.hpp"

namespace greenop {

// Space-time transform with continuum normalization:
//   forward  u^(tau,xi) = dt dx^n sum u(t,x) e^{-i(t tau + x.xi)}
//   inverse  u(t,x) = 1/(Lt Lx^n) sum u^(tau,xi) e^{+i(t tau + x.xi)}
// Frequency data is stored in transform order (see SpaceTimeGrid::tau).
Field forward_transform(const Field& u);
Field inverse_transform(const Field& uhat);
void forward_inplace(Field& u);
void inverse_inplace(Field& u);

// Spatial transforms of every time slice (weights dx^n and 1/Lx^n).
void spatial_forward(Field& u);
void spatial_inverse(Field& u);
void spatial_forward(SpatialField& u);
void spatial_inverse(SpatialField& u);

// Time transforms of every spatial point (weights dt and 1/Lt).
void time_forward(Field& u);
void time_inverse(Field& u);

namespace kernels::serial {
// Single full-rank transform of the whole lattice; reference for the sliced
// OpenMP path. Unnormalized, sign = -1 forward, +1 inverse.
void dft_full(Field& u, int sign);
}  // namespace kernels::serial

namespace kernels::omp {
// Sliced transforms with OpenMP over slices / blocks of lines. Unnormalized.
void dft_full(Field& u, int sign);
void dft_space(cplx* data, const SpaceTimeGrid& g, std::size_t slices, int sign);
void dft_time(Field& u, int sign);
}  // namespace kernels::omp

}  // namespace greenop
