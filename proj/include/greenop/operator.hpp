#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "greenop/coefficients.hpp"
#include "greenop/field.hpp"

namespace greenop {

// Time discretization of d/dt. spectral: i tau. causal_euler: the backward
// Euler difference (1 - e^{-i tau dt})/dt, whose Green function is causal.
enum class TimeScheme { spectral, causal_euler };
// forward: d_t + L + kappa. backward: -d_t + L* + kappa.
enum class Direction { forward, backward };
// homogeneous: Vdot norm. inhomogeneous: adds the L^2 norm.
enum class NormMode { homogeneous, inhomogeneous };

// Symbol of (d_t + kappa) or (-d_t + kappa) on each time frequency row, in
// transform order. The Euler symbol folds kappa in as (1 - e^{-(kappa +- i tau)dt})/dt.
std::vector<cplx> time_symbol(const SpaceTimeGrid& g, TimeScheme scheme, double kappa,
                              Direction dir = Direction::forward);

// L u, or L* u when adjoint is set; spectral derivatives in space only.
Field apply_L(const CoefficientSet& c, const Field& u, bool adjoint = false);
// L on data spatially transformed slice by slice; input and output are in the
// (t, xi) representation.
Field apply_L_spectral(const CoefficientSet& c, const Field& uxi, bool adjoint = false);
// (d_t + L + kappa) u, or (-d_t + L* + kappa) u for the backward direction.
Field apply_H(const CoefficientSet& c, const Field& u, double kappa = 0.0,
              TimeScheme scheme = TimeScheme::spectral, Direction dir = Direction::forward);

// <d_t u, v> + <A grad u, grad v> + <a u, grad v> + <b.grad u, v> + <a0 u, v>.
cplx pairing(const CoefficientSet& c, const Field& u, const Field& v,
             TimeScheme scheme = TimeScheme::spectral);
// Same form for -d_t + L*.
cplx pairing_adjoint(const CoefficientSet& c, const Field& u, const Field& v,
                     TimeScheme scheme = TimeScheme::spectral);
// Lower-order part only: <a u, grad v> + <b.grad u, v> + <a0 u, v>.
cplx beta_pairing(const CoefficientSet& c, const Field& u, const Field& v);

struct EllipticityBounds {
  double lambda = 0.0;
  double Lambda = 0.0;
  bool elliptic() const { return lambda > 0.0; }
};

// Pointwise: lambda = min eigenvalue of Re A, Lambda = max spectral norm of A.
EllipticityBounds garding_constants(const CoefficientSet& c);

// Coefficients of e^h (d_t + L) e^{-h} for real h; grad h computed spectrally.
CoefficientSet davies_conjugate(const CoefficientSet& c, const SpatialField& h);
// Same with grad h supplied, one SpatialField per component.
CoefficientSet davies_conjugate_gradient(const CoefficientSet& c,
                                         const std::vector<SpatialField>& grad_h);
// Affine h with constant gradient zeta.
CoefficientSet davies_conjugate_gradient(const CoefficientSet& c, const std::vector<double>& zeta);

struct CertificateConfig {
  double kappa = 0.0;
  double delta = 0.0;  // <= 0 selects lambda / (1 + Lambda)
  int probes = 100;
  std::uint64_t seed = 0;
  NormMode mode = NormMode::homogeneous;
  double threshold = NAN;  // NaN selects delta/2 (homogeneous) or delta/4
  TimeScheme scheme = TimeScheme::spectral;
};

struct CoercivityCertificate {
  double delta = 0.0;
  double min_ratio = 0.0;
  double threshold = 0.0;
  int probes = 0;
  bool pass = false;
};

// Re <(H + kappa) u, (Id + delta H_t) u> / ||u||^2 over band-limited probes.
CoercivityCertificate coercivity_certificate(const CoefficientSet& c, const CertificateConfig& cfg);
// The ratio for a single field.
double coercivity_ratio(const CoefficientSet& c, const Field& u, double kappa, double delta,
                        NormMode mode, TimeScheme scheme = TimeScheme::spectral);

}  // namespace greenop
