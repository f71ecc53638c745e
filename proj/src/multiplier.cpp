#include "greenop/multiplier.hpp"

#include <cmath>

#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/kernels.hpp"

namespace greenop {

namespace {

MultiplierSymbol build(const SpaceTimeGrid& g, SymbolKind kind, double param,
                       const std::function<cplx(double, double)>& f) {
  MultiplierSymbol m;
  m.kind = kind;
  m.param = param;
  m.grid = g;
  const std::size_t S = g.spatial_size();
  std::vector<double> xi2(S);
  for (std::size_t x = 0; x < S; ++x) xi2[x] = g.xi_squared(x);
  m.values.resize(g.size());
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = g.tau(k);
    for (std::size_t x = 0; x < S; ++x) m.values[k * S + x] = f(tau, xi2[x]);
  }
  return m;
}

}  // namespace

MultiplierSymbol MultiplierSymbol::time_fraction(const SpaceTimeGrid& g, double alpha) {
  return build(g, SymbolKind::time_fraction, alpha, [alpha](double tau, double) -> cplx {
    if (tau == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    return std::pow(std::abs(tau), alpha);
  });
}

MultiplierSymbol MultiplierSymbol::spatial_fraction(const SpaceTimeGrid& g, double s) {
  return build(g, SymbolKind::spatial_fraction, s, [s](double, double xi2) -> cplx {
    if (xi2 == 0.0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(xi2, 0.5 * s);
  });
}

MultiplierSymbol MultiplierSymbol::hilbert_t(const SpaceTimeGrid& g) {
  return build(g, SymbolKind::hilbert_t, 0.0, [](double tau, double) -> cplx {
    if (tau == 0.0) return 0.0;
    return cplx(0.0, tau > 0 ? 1.0 : -1.0);
  });
}

MultiplierSymbol MultiplierSymbol::heat_resolvent(const SpaceTimeGrid& g) {
  return build(g, SymbolKind::heat_resolvent, 0.0, [](double tau, double xi2) -> cplx {
    if (tau == 0.0 && xi2 == 0.0) return 0.0;
    return 1.0 / cplx(xi2, tau);
  });
}

MultiplierSymbol MultiplierSymbol::vdot_weight(const SpaceTimeGrid& g) {
  return build(g, SymbolKind::vdot_weight, 0.0,
               [](double tau, double xi2) -> cplx { return std::sqrt(std::abs(tau) + xi2); });
}

MultiplierSymbol MultiplierSymbol::vdot_inverse_weight(const SpaceTimeGrid& g) {
  return build(g, SymbolKind::vdot_inverse_weight, 0.0, [](double tau, double xi2) -> cplx {
    if (tau == 0.0 && xi2 == 0.0) return 0.0;
    return 1.0 / std::sqrt(std::abs(tau) + xi2);
  });
}

MultiplierSymbol MultiplierSymbol::custom(const SpaceTimeGrid& g,
                                          const std::function<cplx(double, double)>& f) {
  return build(g, SymbolKind::custom, 0.0, f);
}

MultiplierSymbol MultiplierSymbol::custom_table(const SpaceTimeGrid& g, std::vector<cplx> values) {
  require(values.size() == g.size(), ErrorKind::grid_mismatch, "symbol table size mismatch");
  MultiplierSymbol m;
  m.kind = SymbolKind::custom;
  m.grid = g;
  m.values = std::move(values);
  return m;
}

void multiply_spectrum(Field& uhat, const MultiplierSymbol& m) {
  check_same_grid(uhat.grid, m.grid);
  kernels::omp::multiply(uhat.size(), m.values.data(), uhat.data.data());
}

Field apply_multiplier(const Field& u, const MultiplierSymbol& m) {
  check_same_grid(u.grid, m.grid);
  Field w = forward_transform(u);
  multiply_spectrum(w, m);
  inverse_inplace(w);
  return w;
}

Field remove_joint_mean(const Field& u) {
  Field w = u;
  cplx mean = 0.0;
  for (const cplx& z : u.data) mean += z;
  mean /= static_cast<double>(u.size());
  for (cplx& z : w.data) z -= mean;
  return w;
}

Field remove_time_mean(const Field& u) {
  Field w = u;
  const std::size_t S = u.grid.spatial_size();
  for (std::size_t x = 0; x < S; ++x) {
    cplx mean = 0.0;
    for (int j = 0; j < u.grid.Nt; ++j) mean += u(j, x);
    mean /= static_cast<double>(u.grid.Nt);
    for (int j = 0; j < u.grid.Nt; ++j) w(j, x) -= mean;
  }
  return w;
}

}  // namespace greenop
