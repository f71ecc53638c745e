#pragma once

#include <optional>
#include <vector>

#include "greenop/coefficients.hpp"
#include "greenop/field.hpp"
#include "greenop/operator.hpp"

namespace greenop {

struct SolverConfig {
  double kappa = 0.0;
  double delta = 0.0;  // <= 0 selects lambda / (1 + Lambda)
  double tol = 1e-8;
  int max_iter = 500;
  NormMode mode = NormMode::homogeneous;
  TimeScheme scheme = TimeScheme::spectral;
  int restart = 60;
  bool force = false;              // skip the ellipticity and certificate gates
  bool check_certificate = true;   // run a probe certificate before solving
  int certificate_probes = 16;
  std::uint64_t seed = 0;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // dual-norm residual relative to the dual norm of f
  bool converged = false;
  std::optional<CoercivityCertificate> certificate;
  double delta = 0.0;
  double inverse_bound = 0.0;        // ||u|| / ||f||_dual
  double inverse_bound_limit = 0.0;  // 2/delta or 4/delta
  bool inverse_bound_ok = true;
  double wall_time = 0.0;
};

struct SolveResult {
  Field u;
  SolveReport report;
};

// v^ = (i tau + |xi|^2)^{-1} w^; w must have no mass on the joint zero mode.
Field solve_heat(const Field& w);
// sup over grid frequencies of |m| with m = (|tau|+|xi|^2)^{1/2} (i tau+|xi|^2)^{-1} |tau|^{theta/2} |xi|^{1-theta}.
double heat_multiplier_sup(const SpaceTimeGrid& g, double theta);

// (2 pi)^{-1/2} (int |s|^theta / (1 + s^2) ds)^{1/2} by adaptive quadrature.
double theta_constant(double theta);
// Same integral by a second, independent rule (tanh-sinh after s -> 1/s).
double theta_constant_alt(double theta);

// Solves (H + kappa) u = f (forward) or (-d_t + L* + kappa) u = f (backward).
SolveResult solve_variational(const CoefficientSet& c, const Field& f, const SolverConfig& cfg,
                              Direction dir = Direction::forward);

// Dual norm of f matching the solver's residual metric.
double dual_norm(const Field& f, NormMode mode);

// |LHS - RHS| of ||u(tau)||^2 - ||u(sigma)||^2 = 2 Re int <F, grad u> + <g + h, u> dt,
// trapezoidal in time. Slices are indices with sigma < tau.
double energy_identity_residual(const Field& u, const std::vector<Field>& F, const Field& g,
                                const Field& h, int sigma, int tau);
// Polarized identity for two solutions of d_t u = -div F + g.
double energy_identity_polarized(const Field& u, const std::vector<Field>& F, const Field& g,
                                 const Field& ut, const std::vector<Field>& Ft, const Field& gt,
                                 int sigma, int tau);

}  // namespace greenop
