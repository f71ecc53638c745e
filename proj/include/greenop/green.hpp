#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "greenop/coefficients.hpp"
#include "greenop/field.hpp"
#include "greenop/solver.hpp"

namespace greenop {

enum class PropagatorFlag { green, fundamental };

// Orbit t -> G_kappa(t, s) psi of a Dirac datum at slice s.
struct Trajectory {
  int s = 0;
  double kappa = 0.0;        // requested damping; data holds G_kappa
  double kappa_solve = 0.0;  // damping of the internal solve
  double psi_norm = 0.0;
  Direction dir = Direction::forward;
  Field data;
  SpatialField plus;   // slice s + 1
  SpatialField minus;  // slice s - 1
  SolveReport report;  // of the correction solve
};

// Damping used internally so the periodic window decays by tol: 1.2 ln(1/tol) / Lt.
double wrap_kappa(const SpaceTimeGrid& g, double tol);

// Column solver bound to one operator and direction; the certificate runs once
// at construction. The exact propagator of the mean constant-coefficient
// operator is subtracted analytically and the smooth remainder is solved with
// the causal Euler scheme at damping kappa_s = max(kappa, wrap_kappa).
class GreenSolver {
 public:
  GreenSolver(const CoefficientSet& c, const SolverConfig& cfg,
              Direction dir = Direction::forward);

  double kappa() const { return kappa_; }
  double kappa_solve() const { return kappa_s_; }
  const SpaceTimeGrid& grid() const { return c_.grid; }
  const std::optional<CoercivityCertificate>& certificate() const { return certificate_; }

  Trajectory column(int s, const SpatialField& psi) const;
  // G_{kappa_s} orbit without reweighting.
  Field raw(int s, const SpatialField& psi, SolveReport* report = nullptr) const;
  // G_{kappa_s} -> G_kappa in place.
  void reweight(Field& u, int s) const;

 private:
  void build_reference();

  CoefficientSet c_;
  Direction dir_;
  double kappa_ = 0.0, kappa_s_ = 0.0;
  SolverConfig inner_;
  std::optional<CoercivityCertificate> certificate_;
  std::vector<cplx> a_, symbol0_, period_;
};

// Solves (d_t + L + kappa) u = delta_s (x) psi (forward) or
// (-d_t + L* + kappa) u = delta_s (x) psi (backward) on the periodic window.
// The exact propagator of the mean constant-coefficient operator is
// subtracted analytically and the smooth remainder is solved with the causal
// Euler scheme.
Trajectory green_column(const CoefficientSet& c, const SolverConfig& cfg, int s,
                        const SpatialField& psi, Direction dir = Direction::forward);

struct PropagatorMatrix {
  SpaceTimeGrid grid;
  int s = 0;
  int t = 0;
  double kappa = 0.0;
  PropagatorFlag flag = PropagatorFlag::green;
  Direction dir = Direction::forward;
  Eigen::MatrixXcd M;  // S x S acting on sample vectors

  double s_time() const { return s * grid.dt; }
  double t_time() const { return t * grid.dt; }
  SpatialField apply(const SpatialField& psi) const;
  // Kernel value Gamma(t, x, s, y) = M(x, y) / dx^n.
  cplx kernel(std::size_t x, std::size_t y) const { return M(x, y) / grid.spatial_cell(); }
};

// One sweep over the spatial basis at source s gives every target slice.
std::vector<PropagatorMatrix> propagator_set(const CoefficientSet& c, const SolverConfig& cfg,
                                             int s, const std::vector<int>& targets,
                                             PropagatorFlag flag = PropagatorFlag::green,
                                             Direction dir = Direction::forward);
PropagatorMatrix propagator(const CoefficientSet& c, const SolverConfig& cfg, int s, int t,
                            PropagatorFlag flag = PropagatorFlag::green,
                            Direction dir = Direction::forward);

double operator_norm(const Eigen::MatrixXcd& M);

// ||Gts - Gtr Grs|| / ||Gts|| with r strictly between s and t.
double chapman_kolmogorov_defect(const PropagatorMatrix& Gts, const PropagatorMatrix& Gtr,
                                 const PropagatorMatrix& Grs);
// ||Gts - (Gst_adj)^H|| / ||Gts|| for the forward G(t,s) and backward G~(s,t).
double adjoint_defect(const PropagatorMatrix& Gts, const PropagatorMatrix& Gst_adj);
// max ||u(t)|| / ||psi|| over t in [s - 0.1 Lt, s - 2 dt] (forward sense).
double causality_defect(const Trajectory& traj);
// Threshold the causality defect is compared against.
double causality_threshold(const SpaceTimeGrid& g, double kappa, double tol);
// (Pi+ psi, Pi- psi) read one slice away from the source.
std::pair<SpatialField, SpatialField> pi_limits(const Trajectory& traj);
// ||Pi+ psi - Pi- psi - sign psi|| / ||psi|| with sign +1 forward, -1 backward.
double jump_defect(const Trajectory& traj, const SpatialField& psi);

// Randomized-sketch defects for large spatial lattices: k Gaussian probes.
double sketch_chapman_kolmogorov_defect(const CoefficientSet& c, const SolverConfig& cfg, int s,
                                        int r, int t, int k, std::uint64_t seed);
double sketch_adjoint_defect(const CoefficientSet& c, const SolverConfig& cfg, int s, int t, int k,
                             std::uint64_t seed);

// Coefficients extended outside [0, T] by A = Id and zero lower order.
CoefficientSet canonical_extension(const CoefficientSet& c, double T);

struct CauchyResult {
  Field u;           // on the full window; meaningful on slices with t <= T
  int last_slice = 0;
  double kappa = 0.0;
  double causality = 0.0;
  SolveReport report;
};

// u(0) = psi, d_t u + L u = -div F + g + h on (0, T).
CauchyResult solve_cauchy(const CoefficientSet& c, const SpatialField& psi,
                          const std::vector<Field>& F, const Field& g, const Field& h, double T,
                          const SolverConfig& cfg);

// GOP1 propagator files.
void write_propagator(const std::string& path, const PropagatorMatrix& P);
PropagatorMatrix read_propagator(const std::string& path);

}  // namespace greenop
