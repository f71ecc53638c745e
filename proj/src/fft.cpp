#include "greenop/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "greenop/kernels.hpp"

namespace greenop {

namespace {

enum class PlanKind { space, time, full };

using PlanKey = std::tuple<PlanKind, int, int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& kv : plans_) fftw_destroy_plan(kv.second);
  }

  fftw_plan get(PlanKind kind, int n, int Nx, int Nt, int sign, int block) {
    const PlanKey key{kind, n, Nx, Nt, sign, block};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_plan p = make(kind, n, Nx, Nt, sign, block);
    plans_.emplace(key, p);
    return p;
  }

 private:
  static fftw_plan make(PlanKind kind, int n, int Nx, int Nt, int sign, int block) {
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    int S = 1;
    for (int c = 0; c < n; ++c) S *= Nx;
    std::size_t len = 0;
    switch (kind) {
      case PlanKind::space: len = S; break;
      case PlanKind::time: len = static_cast<std::size_t>(Nt) * S; break;
      case PlanKind::full: len = static_cast<std::size_t>(Nt) * S; break;
    }
    auto* buf = fftw_alloc_complex(len);
    fftw_plan p = nullptr;
    if (kind == PlanKind::space) {
      int dims[3] = {Nx, Nx, Nx};
      p = fftw_plan_dft(n, dims, buf, buf, sign, flags);
    } else if (kind == PlanKind::time) {
      int dims[1] = {Nt};
      p = fftw_plan_many_dft(1, dims, block, buf, nullptr, S, 1, buf, nullptr, S, 1, sign, flags);
    } else {
      int dims[4] = {Nt, Nx, Nx, Nx};
      p = fftw_plan_dft(n + 1, dims, buf, buf, sign, flags);
    }
    fftw_free(buf);
    return p;
  }

  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

int time_block(std::size_t S) { return static_cast<int>(std::min<std::size_t>(S, 64)); }

}  // namespace

namespace kernels::serial {

void dft_full(Field& u, int sign) {
  const auto& g = u.grid;
  fftw_plan p = cache().get(PlanKind::full, g.n, g.Nx, g.Nt, sign, 0);
  fftw_execute_dft(p, as_fftw(u.data.data()), as_fftw(u.data.data()));
}

}  // namespace kernels::serial

namespace kernels::omp {

void dft_space(cplx* data, const SpaceTimeGrid& g, std::size_t slices, int sign) {
  fftw_plan p = cache().get(PlanKind::space, g.n, g.Nx, 0, sign, 0);
  const std::size_t S = g.spatial_size();
  const long m = static_cast<long>(slices);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < m; ++j) {
    cplx* s = data + static_cast<std::size_t>(j) * S;
    fftw_execute_dft(p, as_fftw(s), as_fftw(s));
  }
}

void dft_time(Field& u, int sign) {
  const auto& g = u.grid;
  const std::size_t S = g.spatial_size();
  const int B = time_block(S);
  fftw_plan p = cache().get(PlanKind::time, g.n, g.Nx, g.Nt, sign, B);
  const long blocks = static_cast<long>(S / B);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    cplx* s = u.data.data() + static_cast<std::size_t>(b) * B;
    fftw_execute_dft(p, as_fftw(s), as_fftw(s));
  }
}

void dft_full(Field& u, int sign) {
  dft_space(u.data.data(), u.grid, u.grid.Nt, sign);
  dft_time(u, sign);
}

}  // namespace kernels::omp

void forward_inplace(Field& u) {
  kernels::omp::dft_full(u, FFTW_FORWARD);
  kernels::omp::scale(u.size(), u.grid.cell_volume(), u.data.data());
}

void inverse_inplace(Field& u) {
  kernels::omp::dft_full(u, FFTW_BACKWARD);
  kernels::omp::scale(u.size(), 1.0 / u.grid.volume(), u.data.data());
}

Field forward_transform(const Field& u) {
  Field out = u;
  forward_inplace(out);
  return out;
}

Field inverse_transform(const Field& uhat) {
  Field out = uhat;
  inverse_inplace(out);
  return out;
}

void spatial_forward(Field& u) {
  kernels::omp::dft_space(u.data.data(), u.grid, u.grid.Nt, FFTW_FORWARD);
  kernels::omp::scale(u.size(), u.grid.spatial_cell(), u.data.data());
}

void spatial_inverse(Field& u) {
  kernels::omp::dft_space(u.data.data(), u.grid, u.grid.Nt, FFTW_BACKWARD);
  kernels::omp::scale(u.size(), 1.0 / u.grid.spatial_volume(), u.data.data());
}

void spatial_forward(SpatialField& u) {
  kernels::omp::dft_space(u.data.data(), u.grid, 1, FFTW_FORWARD);
  kernels::serial::scale(u.size(), u.grid.spatial_cell(), u.data.data());
}

void spatial_inverse(SpatialField& u) {
  kernels::omp::dft_space(u.data.data(), u.grid, 1, FFTW_BACKWARD);
  kernels::serial::scale(u.size(), 1.0 / u.grid.spatial_volume(), u.data.data());
}

void time_forward(Field& u) {
  kernels::omp::dft_time(u, FFTW_FORWARD);
  kernels::omp::scale(u.size(), u.grid.dt, u.data.data());
}

void time_inverse(Field& u) {
  kernels::omp::dft_time(u, FFTW_BACKWARD);
  kernels::omp::scale(u.size(), 1.0 / u.grid.Lt, u.data.data());
}

}  // namespace greenop
