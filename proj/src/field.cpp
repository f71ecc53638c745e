#include "greenop/field.hpp"

#include <cmath>

#include "greenop/error.hpp"
#include "greenop/kernels.hpp"

namespace greenop {

Field::Field(const SpaceTimeGrid& g, cplx value) : grid(g), data(g.size(), value) {}

Field& Field::operator+=(const Field& o) {
  check_same_grid(grid, o.grid);
  kernels::omp::axpy(size(), 1.0, o.data.data(), data.data());
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_same_grid(grid, o.grid);
  kernels::omp::axpy(size(), -1.0, o.data.data(), data.data());
  return *this;
}

Field& Field::operator*=(cplx a) {
  kernels::omp::scale(size(), a, data.data());
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx a, Field b) { return b *= a; }

SpatialField::SpatialField(const SpaceTimeGrid& g, cplx value)
    : grid(g), data(g.spatial_size(), value) {}

void check_same_grid(const SpaceTimeGrid& a, const SpaceTimeGrid& b) {
  require(a == b, ErrorKind::grid_mismatch, "fields live on different grids");
}

void check_finite(const Field& u) {
  for (const cplx& z : u.data) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::invalid_argument,
            "field has non-finite entries");
  }
}

void check_finite(const SpatialField& u) {
  for (const cplx& z : u.data) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::invalid_argument,
            "spatial field has non-finite entries");
  }
}

cplx inner(const Field& u, const Field& v) {
  check_same_grid(u.grid, v.grid);
  return kernels::omp::dot(u.size(), u.data.data(), v.data.data()) * u.grid.cell_volume();
}

double norm(const Field& u) {
  return std::sqrt(kernels::omp::norm2(u.size(), u.data.data()) * u.grid.cell_volume());
}

cplx inner(const SpatialField& u, const SpatialField& v) {
  require(u.grid.n == v.grid.n && u.grid.Nx == v.grid.Nx && u.grid.Lx == v.grid.Lx,
          ErrorKind::grid_mismatch, "spatial fields live on different grids");
  return kernels::omp::dot(u.size(), u.data.data(), v.data.data()) * u.grid.spatial_cell();
}

double norm(const SpatialField& u) {
  return std::sqrt(kernels::omp::norm2(u.size(), u.data.data()) * u.grid.spatial_cell());
}

SpatialField get_slice(const Field& u, std::size_t j) {
  SpatialField s(u.grid);
  const cplx* p = u.slice(j);
  std::copy(p, p + s.size(), s.data.begin());
  return s;
}

void set_slice(Field& u, std::size_t j, const SpatialField& s) {
  require(s.size() == u.grid.spatial_size(), ErrorKind::grid_mismatch, "slice size mismatch");
  std::copy(s.data.begin(), s.data.end(), u.slice(j));
}

Field broadcast(const SpatialField& s) {
  Field u(s.grid);
  for (int j = 0; j < u.grid.Nt; ++j) set_slice(u, j, s);
  return u;
}

Field tensor(const std::vector<cplx>& f, const SpatialField& g) {
  require(f.size() == static_cast<std::size_t>(g.grid.Nt), ErrorKind::grid_mismatch,
          "time profile length mismatch");
  Field u(g.grid);
  const std::size_t S = g.size();
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t x = 0; x < S; ++x) u(j, x) = f[j] * g[x];
  }
  return u;
}

}  // namespace greenop
