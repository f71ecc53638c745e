#pragma once

#include <complex>
#include <cstddef>

namespace greenop::kernels {

using cplx = std::complex<double>;

// Coefficient sample access: p[t * stride_t + x] when p is set, c otherwise.
// stride_t = 0 encodes time-independent storage.
struct CoefView {
  const cplx* p = nullptr;
  std::size_t stride_t = 0;
  cplx c = 0.0;
  cplx at(std::size_t t, std::size_t x) const { return p ? p[t * stride_t + x] : c; }
  bool zero() const { return p == nullptr && c == cplx(0.0); }
};

// Pointwise part of L: flux_i = sum_j A_ij g_j + a_i u, lower = sum_i b_i g_i + a0 u.
// Arrays g[i], flux[i] hold Nt * S samples each.
struct FluxArgs {
  int n = 1;
  std::size_t Nt = 0;
  std::size_t S = 0;
  const CoefView* A = nullptr;  // n*n, row-major
  const CoefView* avec = nullptr;
  const CoefView* bvec = nullptr;
  CoefView a0;
  bool adjoint = false;  // use A^H, conj(b) in the flux and conj(a), conj(a0) below
  const cplx* u = nullptr;
  const cplx* const* g = nullptr;
  cplx* const* flux = nullptr;
  cplx* lower = nullptr;
};

// Reference implementations: plain loops.
namespace serial {
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
void scale(std::size_t n, cplx a, cplx* x);
void multiply(std::size_t n, const cplx* m, cplx* x);
void multiply_real(std::size_t n, const double* m, cplx* x);
cplx dot(std::size_t n, const cplx* x, const cplx* y);
double norm2(std::size_t n, const cplx* x);
double max_abs(std::size_t n, const cplx* x);
void flux(const FluxArgs& args);
}  // namespace serial

// OpenMP implementations. Reductions sum fixed-size chunks and combine the
// partial sums in order, so results do not depend on the thread count.
namespace omp {
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
void scale(std::size_t n, cplx a, cplx* x);
void multiply(std::size_t n, const cplx* m, cplx* x);
void multiply_real(std::size_t n, const double* m, cplx* x);
cplx dot(std::size_t n, const cplx* x, const cplx* y);
double norm2(std::size_t n, const cplx* x);
double max_abs(std::size_t n, const cplx* x);
void flux(const FluxArgs& args);
}  // namespace omp

inline constexpr std::size_t reduction_chunk = 4096;

}  // namespace greenop::kernels
