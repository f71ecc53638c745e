#pragma once

#include <cstdint>
#include <random>

#include "greenop/field.hpp"

namespace greenop {

// Counter-based seed splitter: stream k of root r is splitmix64(r + k * golden).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t sub_seed(std::uint64_t root, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  cplx complex_normal();  // E|z|^2 = 1
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// White noise with independent complex normal samples.
Field random_field(const SpaceTimeGrid& g, Rng& rng);
SpatialField random_spatial_field(const SpaceTimeGrid& g, Rng& rng);

// Complex Gaussian Fourier coefficients on the integer modes |k_t| <= kt,
// |k_x,c| <= kx. The draw order depends only on the mode indices, so the same
// seed gives the same continuum function on every grid with the same periods.
// With zero_mean the joint zero mode is left empty.
Field band_limited_field(const SpaceTimeGrid& g, std::uint64_t seed, int kt, int kx,
                         bool zero_mean = true, double decay = 0.0);
SpatialField band_limited_spatial(const SpaceTimeGrid& g, std::uint64_t seed, int kx,
                                  bool zero_mean = false, double decay = 0.0);

}  // namespace greenop
