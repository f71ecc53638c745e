#include <benchmark/benchmark.h>

#include <vector>

#include "greenop/fft.hpp"
#include "greenop/kernels.hpp"
#include "greenop/rng.hpp"

using namespace greenop;

namespace {

std::vector<cplx> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(n);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

template <bool Parallel>
void BM_axpy(benchmark::State& state) {
  const std::size_t n = state.range(0);
  auto x = noise(n, 1), y = noise(n, 2);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::axpy(n, 0.5, x.data(), y.data());
    } else {
      kernels::serial::axpy(n, 0.5, x.data(), y.data());
    }
    benchmark::ClobberMemory();
  }
}

template <bool Parallel>
void BM_dot(benchmark::State& state) {
  const std::size_t n = state.range(0);
  auto x = noise(n, 1), y = noise(n, 2);
  for (auto _ : state) {
    cplx d = Parallel ? kernels::omp::dot(n, x.data(), y.data())
                      : kernels::serial::dot(n, x.data(), y.data());
    benchmark::DoNotOptimize(d);
  }
}

template <bool Parallel>
void BM_flux(benchmark::State& state) {
  const auto g = make_grid(2, static_cast<int>(state.range(0)), 1.0, 64, 1.0);
  const std::size_t N = g.size();
  auto u = noise(N, 1), g0 = noise(N, 2), g1 = noise(N, 3), A = noise(g.spatial_size(), 4);
  std::vector<cplx> f0(N), f1(N), lower(N);
  kernels::CoefView Av[4] = {{A.data(), 0, 0.0}, {nullptr, 0, 0.2}, {nullptr, 0, -0.2},
                             {A.data(), 0, 0.0}};
  kernels::CoefView vec[2] = {{nullptr, 0, 0.1}, {nullptr, 0, 0.1}};
  const cplx* gs[2] = {g0.data(), g1.data()};
  cplx* fs[2] = {f0.data(), f1.data()};
  kernels::FluxArgs args;
  args.n = 2;
  args.Nt = g.Nt;
  args.S = g.spatial_size();
  args.A = Av;
  args.avec = vec;
  args.bvec = vec;
  args.a0 = {nullptr, 0, 0.3};
  args.u = u.data();
  args.g = gs;
  args.flux = fs;
  args.lower = lower.data();
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::flux(args);
    } else {
      kernels::serial::flux(args);
    }
    benchmark::ClobberMemory();
  }
}

template <bool Parallel>
void BM_transform(benchmark::State& state) {
  const auto g = make_grid(2, static_cast<int>(state.range(0)), 1.0, 64, 1.0);
  Rng rng(5);
  Field u = random_field(g, rng);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::dft_full(u, -1);
    } else {
      kernels::serial::dft_full(u, -1);
    }
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_axpy<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_axpy<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_flux<false>)->Arg(32)->Arg(128);
BENCHMARK(BM_flux<true>)->Arg(32)->Arg(128);
BENCHMARK(BM_transform<false>)->Arg(32)->Arg(128);
BENCHMARK(BM_transform<true>)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
