#pragma once

#include <vector>

#include "greenop/coefficients.hpp"
#include "greenop/exponents.hpp"
#include "greenop/field.hpp"

namespace greenop {

// (sum_t (sum_x |u|^q dx^n)^{r/q} dt)^{1/r}, max over samples for inf.
double mixed_lebesgue_norm(const Field& u, const ExponentPair& p);

// Lorentz norm of samples with uniform cell measure, evaluated exactly on the
// step rearrangement. idx.p may be +inf (plain sup norm).
double lorentz_norm(const SpatialField& samples, const LorentzIndex& idx, double cell);
double lorentz_norm_abs(std::vector<double> magnitudes, const LorentzIndex& idx, double cell);

// Inner Lorentz norm per time slice, then the outer one of the time profile.
double mixed_lorentz_norm(const Field& u, const LorentzIndex& time_idx,
                          const LorentzIndex& space_idx);

struct VdotNorms {
  double multiplier;  // ||(|tau| + |xi|^2)^{1/2} u^||
  double gradient;    // (||grad u||^2 + ||D_t^{1/2} u||^2)^{1/2}
};
// The joint zero mode is projected out first.
VdotNorms vdot_norm(const Field& u);
// Inhomogeneous norm (||u||^2 + ||grad u||^2 + ||D_t^{1/2} u||^2)^{1/2}.
double inhomogeneous_norm(const Field& u);
// Dual norms against the homogeneous / inhomogeneous weights.
double vdot_dual_norm(const Field& f);
double inhomogeneous_dual_norm(const Field& f);

// || |tau|^{-theta/2} |xi|^{-(1-theta)} w^ ||; rejects mass on zero-weight modes.
double h_theta_norm(const Field& w, double theta);

// P = || |a|^2 ||^{1/2} + || |b|^2 ||^{1/2} + ||a0|| in L^r L^q (or weak Lorentz).
double coefficient_size(const CoefficientSet& c, const ExponentPair& p, bool lorentz = false);

struct CoefficientSize {
  double P_small = 0.0;
  double P_inf = 0.0;
  double epsilon = 0.0;
};

struct EpsilonDecomposition {
  Field small;
  Field bounded;
  CoefficientSize report;
  double height = 0.0;  // truncation height M
  bool ok = true;
  std::string message;
};

// Splits coeff = small + bounded with small = coeff 1{|coeff| > M} and the
// smallest height M whose tail has mixed norm <= eps. Heights above
// max_height count as failure.
EpsilonDecomposition epsilon_decomposition(const Field& coeff, const ExponentPair& p, double eps,
                                           double max_height = INFINITY);

// Decomposition of a whole coefficient set: |a|^2, |b|^2 at level eps^2 and
// a0 at level eps. P_inf = || |a_inf| || + || |b_inf| || + ||a0_inf||^{1/2}.
CoefficientSize coefficient_decomposition(const CoefficientSet& c, const ExponentPair& p,
                                          double eps);
// Sup aggregate with no small part.
double p_infinity(const CoefficientSet& c);

struct TimeRange {
  int begin = 0;
  int end = -1;  // exclusive; -1 means Nt
};

// ||d^alpha u||_{L^r(I; L^{q,2})} / (||grad^m u||_{L^2L^2}^{2/r} ||u||_{L^inf L^2}^{1-2/r}).
double gagliardo_nirenberg_ratio(const Field& u, const std::vector<int>& alpha, int m,
                                 const ExponentPair& p, TimeRange interval = {});

}  // namespace greenop
