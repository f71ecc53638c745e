#pragma once

#include <functional>
#include <vector>

#include "greenop/field.hpp"

namespace greenop {

enum class SymbolKind {
  time_fraction,
  spatial_fraction,
  hilbert_t,
  heat_resolvent,
  vdot_weight,
  vdot_inverse_weight,
  custom,
};

// Fourier multiplier sampled on every frequency pair, in transform order.
struct MultiplierSymbol {
  SymbolKind kind = SymbolKind::custom;
  double param = 0.0;
  SpaceTimeGrid grid;
  std::vector<cplx> values;

  cplx at(std::size_t k, std::size_t x) const { return values[k * grid.spatial_size() + x]; }

  // |tau|^alpha, zero at tau = 0.
  static MultiplierSymbol time_fraction(const SpaceTimeGrid& g, double alpha);
  // |xi|^s, zero at xi = 0 when s != 0.
  static MultiplierSymbol spatial_fraction(const SpaceTimeGrid& g, double s);
  // i tau / |tau|, zero at tau = 0.
  static MultiplierSymbol hilbert_t(const SpaceTimeGrid& g);
  // 1 / (i tau + |xi|^2), zero at the joint zero mode.
  static MultiplierSymbol heat_resolvent(const SpaceTimeGrid& g);
  // (|tau| + |xi|^2)^{1/2} and its reciprocal (zero at the joint zero mode).
  static MultiplierSymbol vdot_weight(const SpaceTimeGrid& g);
  static MultiplierSymbol vdot_inverse_weight(const SpaceTimeGrid& g);
  static MultiplierSymbol custom(const SpaceTimeGrid& g,
                                 const std::function<cplx(double tau, double xi2)>& f);
  static MultiplierSymbol custom_table(const SpaceTimeGrid& g, std::vector<cplx> values);
};

Field apply_multiplier(const Field& u, const MultiplierSymbol& m);
// Multiply frequency data in place.
void multiply_spectrum(Field& uhat, const MultiplierSymbol& m);

// Projection onto the joint zero mode (the space-time mean) and its complement.
Field remove_joint_mean(const Field& u);
// Remove the tau = 0 row (time mean at every x).
Field remove_time_mean(const Field& u);

}  // namespace greenop
