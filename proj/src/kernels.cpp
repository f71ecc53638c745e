#include "greenop/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace greenop::kernels {

namespace {

template <bool Adjoint>
void flux_slice(const FluxArgs& a, std::size_t t) {
  const std::size_t base = t * a.S;
  const int n = a.n;
  for (std::size_t x = 0; x < a.S; ++x) {
    const std::size_t i = base + x;
    const cplx u = a.u[i];
    cplx lower = 0.0;
    for (int r = 0; r < n; ++r) {
      cplx f = 0.0;
      for (int c = 0; c < n; ++c) {
        const cplx gc = a.g[c][i];
        if constexpr (Adjoint) {
          f += std::conj(a.A[c * n + r].at(t, x)) * gc;
        } else {
          f += a.A[r * n + c].at(t, x) * gc;
        }
      }
      if constexpr (Adjoint) {
        f += std::conj(a.bvec[r].at(t, x)) * u;
        lower += std::conj(a.avec[r].at(t, x)) * a.g[r][i];
      } else {
        f += a.avec[r].at(t, x) * u;
        lower += a.bvec[r].at(t, x) * a.g[r][i];
      }
      a.flux[r][i] = f;
    }
    if constexpr (Adjoint) {
      lower += std::conj(a.a0.at(t, x)) * u;
    } else {
      lower += a.a0.at(t, x) * u;
    }
    a.lower[i] = lower;
  }
}

void flux_one(const FluxArgs& a, std::size_t t) {
  if (a.adjoint) {
    flux_slice<true>(a, t);
  } else {
    flux_slice<false>(a, t);
  }
}

}  // namespace

namespace serial {

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, cplx a, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void multiply(std::size_t n, const cplx* m, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

void multiply_real(std::size_t n, const double* m, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

cplx dot(std::size_t n, const cplx* x, const cplx* y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm2(std::size_t n, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

double max_abs(std::size_t n, const cplx* x) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

void flux(const FluxArgs& args) {
  for (std::size_t t = 0; t < args.Nt; ++t) flux_one(args, t);
}

}  // namespace serial

namespace omp {

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, cplx a, cplx* x) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void multiply(std::size_t n, const cplx* m, cplx* x) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

void multiply_real(std::size_t n, const double* m, cplx* x) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

cplx dot(std::size_t n, const cplx* x, const cplx* y) {
  const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
  std::vector<cplx> part(chunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * reduction_chunk;
    const std::size_t hi = std::min(n, lo + reduction_chunk);
    cplx s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * std::conj(y[i]);
    part[c] = s;
  }
  cplx s = 0.0;
  for (const cplx& p : part) s += p;
  return s;
}

double norm2(std::size_t n, const cplx* x) {
  const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
  std::vector<double> part(chunks);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * reduction_chunk;
    const std::size_t hi = std::min(n, lo + reduction_chunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(x[i]);
    part[c] = s;
  }
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

double max_abs(std::size_t n, const cplx* x) {
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

void flux(const FluxArgs& args) {
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < args.Nt; ++t) flux_one(args, t);
}

}  // namespace omp

}  // namespace greenop::kernels
