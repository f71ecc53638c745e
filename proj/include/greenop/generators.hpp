#pragma once

#include <cstdint>

#include "greenop/coefficients.hpp"
#include "greenop/exponents.hpp"

namespace greenop {

struct EllipticOptions {
  bool real = false;       // real-valued entries
  bool symmetric = false;  // no skew part
  bool time_dependent = true;
  int kx = 3;  // spatial band of the underlying smooth fields
  int kt = 2;  // temporal band
};

// Smooth random A with min eig(Re A) = lambda and |A| <= Lambda at every
// lattice point. The Hermitian part is mapped affinely into [lambda, mu] and
// the skew part is scaled to size Lambda - mu, mu = lambda + 3(Lambda - lambda)/4.
CoefficientSet random_elliptic(const SpaceTimeGrid& g, double lambda, double Lambda,
                               std::uint64_t seed, const EllipticOptions& opt = {});

struct LowerOrderOptions {
  bool drift_a = true;
  bool drift_b = true;
  bool potential = true;
  bool lorentz = false;  // size measured in the weak mixed norm
  int kx = 3;
  int kt = 2;
};

// Adds smooth random lower-order terms to base, scaled so that
// coefficient_size(result, pair) equals P_target.
CoefficientSet random_lower_order(const CoefficientSet& base, double P_target,
                                  const ExponentPair& pair, std::uint64_t seed,
                                  const LowerOrderOptions& opt = {});

// Default truncation height of the Coulomb potential: 16 / dx^2.
double coulomb_default_cap(const SpaceTimeGrid& g);
// A = Id and a0 = c min(|x - x0|^{-2}, M) with x0 the center of the box and
// the nearest-image distance.
CoefficientSet coulomb(const SpaceTimeGrid& g, cplx c, double M);
// Spatial potential min(|x - x0|^{-2}, M).
SpatialField coulomb_potential(const SpaceTimeGrid& g, double M);

// A = a(x) Id with a = 1 or contrast on alternating half-period blocks.
CoefficientSet checkerboard(const SpaceTimeGrid& g, double contrast);

}  // namespace greenop
