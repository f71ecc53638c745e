#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "greenop/coefficients.hpp"
#include "greenop/green.hpp"
#include "greenop/solver.hpp"

namespace greenop {

struct RegionMask {
  SpaceTimeGrid grid;
  std::vector<char> in;

  // Product of closed periodic intervals [lo_c, hi_c].
  static RegionMask box(const SpaceTimeGrid& g, const std::vector<double>& lo,
                        const std::vector<double>& hi);
  // Closed ball in the torus metric.
  static RegionMask ball(const SpaceTimeGrid& g, const std::vector<double>& center, double radius);

  std::size_t count() const;
  bool empty() const { return count() == 0; }
};

// min over point pairs of the periodic distance.
double region_distance(const RegionMask& E, const RegionMask& F);

struct DecayFit {
  double C = 0.0;
  double c0 = 0.0;  // +inf when no decay fit was attempted (d = 0)
  double omega = 0.0;
  double r2 = 0.0;
  double slope = 0.0;      // of log(value) - omega (t-s) against d^2/(t-s)
  double intercept = 0.0;  // log C before the envelope shift
  double stderr_fit = 0.0;
  bool fitted = false;
  bool envelope = false;  // every sample lies below the fitted line plus 3 standard errors
};

struct DecaySample {
  int s = 0;
  int t = 0;
  double dEF = 0.0;
  double value = 0.0;  // max over probes of ||Gamma(t,s) psi||_E / ||psi||_F
  double bound = 0.0;  // C e^{-d^2/4c0(t-s) + omega(t-s)}
  bool pass = false;
};

struct OffdiagOptions {
  int probes = 5;
  std::uint64_t seed = 0;
  std::vector<double> omega_grid;  // empty selects {0, P^2, ..., 8 P^2} with P = p_infinity
};

struct OffdiagProfile {
  std::vector<DecaySample> samples;
  DecayFit fit;
};

// Samples ||Gamma(t,s) psi||_{L2(E)} / ||psi||_{L2(F)} over random probes in F
// and fits log(value) - omega (t-s) = log C - d^2 / (4 c0 (t-s)).
OffdiagProfile offdiagonal_profile(const CoefficientSet& c, const SolverConfig& cfg,
                                   const RegionMask& E, const RegionMask& F,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   const OffdiagOptions& opt = {});

// Least-squares fit of (log value - omega tau) against x = d^2/tau over the omega grid.
DecayFit fit_decay(const std::vector<double>& x, const std::vector<double>& tau,
                   const std::vector<double>& value, const std::vector<double>& omega_grid);

// kappa = 1 + c0 (gamma^2 + P_inf^2).
double davies_required_kappa(double c0, double gamma, double P_inf);

struct DaviesReport {
  double max_ratio = 0.0;
  double gamma = 0.0;
  double kappa_required = 0.0;
  double kappa_used = 0.0;
  std::vector<double> ratios;  // per (s, t) pair
};

// Conjugates by an affine h with gradient zeta and compares
// ||e^h Gamma(t,s) e^{-h} phi|| with C e^{omega(t-s)} e^{c0 gamma^2 (t-s)} ||phi||.
DaviesReport davies_bound_check(const CoefficientSet& c, const SolverConfig& cfg,
                                const std::vector<double>& zeta,
                                const std::vector<std::pair<int, int>>& pairs, const DecayFit& fit,
                                int probes = 5, std::uint64_t seed = 0);

struct GaussianBoundParams {
  double B = 1.0;
  double C = 1.0;
  double c0 = 1.0;
  double omega = 0.0;
  double rho = 1.0;
  int n = 1;

  // (32 pi c0)^{n/2} 2^{n/2} e^{2/c0} (2^{1+n/2} B C)^2
  double mu() const;
  // mu^{k+1} / (16 pi c0 tau)^{n/2} e^{-r^2/16 c0 tau + omega tau}, k = floor(tau / rho^2).
  double bound(double tau, double r) const;
};

struct GaussianRow {
  double t = 0.0, s = 0.0;
  std::size_t x = 0, y = 0;
  double abs_kernel = 0.0, bound = 0.0, ratio = 0.0;
};

struct GaussianReport {
  double min_ratio = INFINITY;  // bound / |kernel|; >= 1 means the bound holds
  std::size_t violations = 0;
  std::size_t entries = 0;
  std::vector<GaussianRow> rows;  // filled when requested
};

// Evaluates the pointwise bound on every entry of every propagator; kernels are
// entries / dx^n of the fundamental solution.
GaussianReport gaussian_bound_check(const std::vector<PropagatorMatrix>& stack,
                                    const GaussianBoundParams& params, bool keep_rows = false);

struct LocalCenter {
  int t = 0;          // slice index
  std::size_t x = 0;  // spatial index
};

// max over centers of (sup_{B(x,r)} |u(t)|^2 r^{n+2} / int_{Q_2r} |u|^2)^{1/2},
// Q_2r = (t - 4 r^2, t] x B(x, 2r). Cylinders meeting the source slice or the
// half window before it are skipped; source < 0 disables the guard.
double measure_local_bound(const Field& u, double r, const std::vector<LocalCenter>& centers,
                           int source = -1);

struct CoulombReport {
  cplx c = 0.0;
  double M = 0.0;
  double ratio = 0.0;        // min Re<Lu,u> / ||grad u||^2 over mean-zero u
  double probe_ratio = 0.0;  // same over random probes (>= ratio up to round-off)
  double mu_min = 0.0;       // extreme values of <Vu,u>/||grad u||^2
  double mu_max = 0.0;
  bool pass = false;  // lower bound certificate: ratio > 0
};

// Inverse-square potential c min(|x - x0|^{-2}, M) in n = 3; M <= 0 selects
// coulomb_default_cap.
CoulombReport coulomb_scenario(const SpaceTimeGrid& g, cplx c, double M = 0.0, int probes = 8,
                               std::uint64_t seed = 0);

// Extreme Rayleigh quotients of <V u, u> / ||grad u||^2 on mean-zero fields by
// Lanczos with full reorthogonalization.
std::pair<double, double> hardy_quotient_range(const SpatialField& V, int steps = 80);

}  // namespace greenop
