#include "greenop/calculus.hpp"

#include <cmath>

#include "greenop/error.hpp"
#include "greenop/fft.hpp"

namespace greenop {

std::vector<cplx> derivative_symbol(const SpaceTimeGrid& g, int c) {
  const std::size_t S = g.spatial_size();
  std::vector<cplx> out(S);
  for (std::size_t x = 0; x < S; ++x) out[x] = cplx(0.0, g.xi_component(x, c));
  return out;
}

namespace {

void multiply_slices(Field& u, const std::vector<cplx>& sym) {
  const std::size_t S = u.grid.spatial_size();
  const long Nt = u.grid.Nt;
#pragma omp parallel for schedule(static)
  for (long j = 0; j < Nt; ++j) {
    cplx* s = u.slice(j);
    for (std::size_t x = 0; x < S; ++x) s[x] *= sym[x];
  }
}

}  // namespace

std::vector<Field> gradient(const Field& u) {
  Field uhat = u;
  spatial_forward(uhat);
  std::vector<Field> out;
  out.reserve(u.grid.n);
  for (int c = 0; c < u.grid.n; ++c) {
    Field d = uhat;
    multiply_slices(d, derivative_symbol(u.grid, c));
    spatial_inverse(d);
    out.push_back(std::move(d));
  }
  return out;
}

Field divergence(const std::vector<Field>& F) {
  require(!F.empty(), ErrorKind::invalid_argument, "divergence of an empty vector field");
  const auto& g = F[0].grid;
  require(static_cast<int>(F.size()) == g.n, ErrorKind::invalid_argument,
          "divergence needs exactly n components");
  Field acc(g);
  for (int c = 0; c < g.n; ++c) {
    check_same_grid(g, F[c].grid);
    Field d = F[c];
    spatial_forward(d);
    multiply_slices(d, derivative_symbol(g, c));
    acc += d;
  }
  spatial_inverse(acc);
  return acc;
}

Field laplacian(const Field& u) {
  Field d = u;
  spatial_forward(d);
  const std::size_t S = u.grid.spatial_size();
  std::vector<cplx> sym(S);
  for (std::size_t x = 0; x < S; ++x) sym[x] = -u.grid.xi_squared(x);
  multiply_slices(d, sym);
  spatial_inverse(d);
  return d;
}

Field time_derivative(const Field& u) {
  Field d = u;
  time_forward(d);
  const std::size_t S = u.grid.spatial_size();
  for (int k = 0; k < u.grid.Nt; ++k) {
    const cplx f(0.0, u.grid.tau(k));
    cplx* s = d.slice(k);
    for (std::size_t x = 0; x < S; ++x) s[x] *= f;
  }
  time_inverse(d);
  return d;
}

Field partial(const Field& u, const std::vector<int>& alpha) {
  require(static_cast<int>(alpha.size()) == u.grid.n, ErrorKind::invalid_argument,
          "multi-index length must equal n");
  const std::size_t S = u.grid.spatial_size();
  std::vector<cplx> sym(S, 1.0);
  for (int c = 0; c < u.grid.n; ++c) {
    require(alpha[c] >= 0, ErrorKind::invalid_argument, "negative multi-index entry");
    const auto dc = derivative_symbol(u.grid, c);
    for (std::size_t x = 0; x < S; ++x) sym[x] *= std::pow(dc[x], alpha[c]);
  }
  Field d = u;
  spatial_forward(d);
  multiply_slices(d, sym);
  spatial_inverse(d);
  return d;
}

Field gradient_power(const Field& u, int m) {
  const std::size_t S = u.grid.spatial_size();
  std::vector<cplx> sym(S);
  for (std::size_t x = 0; x < S; ++x) sym[x] = std::pow(u.grid.xi_squared(x), 0.5 * m);
  Field d = u;
  spatial_forward(d);
  multiply_slices(d, sym);
  spatial_inverse(d);
  return d;
}

std::vector<SpatialField> gradient(const SpatialField& u) {
  SpatialField uhat = u;
  spatial_forward(uhat);
  std::vector<SpatialField> out;
  for (int c = 0; c < u.grid.n; ++c) {
    SpatialField d = uhat;
    const auto sym = derivative_symbol(u.grid, c);
    for (std::size_t x = 0; x < d.size(); ++x) d[x] *= sym[x];
    spatial_inverse(d);
    out.push_back(std::move(d));
  }
  return out;
}

SpatialField divergence(const std::vector<SpatialField>& F) {
  require(!F.empty(), ErrorKind::invalid_argument, "divergence of an empty vector field");
  const auto& g = F[0].grid;
  require(static_cast<int>(F.size()) == g.n, ErrorKind::invalid_argument,
          "divergence needs exactly n components");
  SpatialField acc(g);
  for (int c = 0; c < g.n; ++c) {
    SpatialField d = F[c];
    spatial_forward(d);
    const auto sym = derivative_symbol(g, c);
    for (std::size_t x = 0; x < d.size(); ++x) acc[x] += d[x] * sym[x];
  }
  spatial_inverse(acc);
  return acc;
}

}  // namespace greenop
