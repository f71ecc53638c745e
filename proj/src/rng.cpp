#include "greenop/rng.hpp"

#include <cmath>

#include "greenop/error.hpp"
#include "greenop/fft.hpp"

namespace greenop {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(root + stream * 0x9E3779B97F4A7C15ULL);
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(eng_);
}

double Rng::normal() {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(eng_);
}

cplx Rng::complex_normal() {
  const double a = normal();
  const double b = normal();
  return cplx(a, b) / std::sqrt(2.0);
}

Field random_field(const SpaceTimeGrid& g, Rng& rng) {
  Field u(g);
  for (auto& z : u.data) z = rng.complex_normal();
  return u;
}

SpatialField random_spatial_field(const SpaceTimeGrid& g, Rng& rng) {
  SpatialField u(g);
  for (auto& z : u.data) z = rng.complex_normal();
  return u;
}

namespace {

// Visits integer modes in a grid-independent order and writes coefficients
// into a transform-order table.
template <typename Put>
void visit_modes(int n, int kt, int kx, Put put) {
  int idx[3] = {0, 0, 0};
  const int span = 2 * kx + 1;
  int total = 1;
  for (int c = 0; c < n; ++c) total *= span;
  for (int k = -kt; k <= kt; ++k) {
    for (int m = 0; m < total; ++m) {
      int r = m;
      for (int c = n - 1; c >= 0; --c) {
        idx[c] = r % span - kx;
        r /= span;
      }
      put(k, idx);
    }
  }
}

}  // namespace

Field band_limited_field(const SpaceTimeGrid& g, std::uint64_t seed, int kt, int kx,
                         bool zero_mean, double decay) {
  require(kt < g.Nt / 2 && kx < g.Nx / 2, ErrorKind::invalid_argument,
          "band exceeds the grid Nyquist range");
  Rng rng(seed);
  Field uhat(g);
  const std::size_t S = g.spatial_size();
  visit_modes(g.n, kt, kx, [&](int k, const int* idx) {
    cplx z = rng.complex_normal();
    double r2 = k * k;
    for (int c = 0; c < g.n; ++c) r2 += idx[c] * idx[c];
    if (zero_mean && r2 == 0) return;
    if (decay > 0) z *= std::exp(-decay * r2);
    const std::size_t kk = static_cast<std::size_t>((k + g.Nt) % g.Nt);
    uhat.data[kk * S + g.ravel(idx)] = z;
  });
  // Unit-scale samples: undo the continuum weights of the inverse transform.
  uhat *= g.volume();
  inverse_inplace(uhat);
  return uhat;
}

SpatialField band_limited_spatial(const SpaceTimeGrid& g, std::uint64_t seed, int kx,
                                  bool zero_mean, double decay) {
  require(kx < g.Nx / 2, ErrorKind::invalid_argument, "band exceeds the grid Nyquist range");
  Rng rng(seed);
  SpatialField uhat(g);
  visit_modes(g.n, 0, kx, [&](int, const int* idx) {
    cplx z = rng.complex_normal();
    double r2 = 0;
    for (int c = 0; c < g.n; ++c) r2 += idx[c] * idx[c];
    if (zero_mean && r2 == 0) return;
    if (decay > 0) z *= std::exp(-decay * r2);
    uhat[g.ravel(idx)] = z;
  });
  for (auto& z : uhat.data) z *= g.spatial_volume();
  spatial_inverse(uhat);
  return uhat;
}

}  // namespace greenop
