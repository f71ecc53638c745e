#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "greenop/grid.hpp"

namespace greenop {

using cplx = std::complex<double>;

// Complex samples over the full lattice, time-major then row-major in space.
struct Field {
  SpaceTimeGrid grid;
  std::vector<cplx> data;

  Field() = default;
  explicit Field(const SpaceTimeGrid& g, cplx value = 0.0);

  std::size_t size() const { return data.size(); }
  cplx* slice(std::size_t j) { return data.data() + j * grid.spatial_size(); }
  const cplx* slice(std::size_t j) const { return data.data() + j * grid.spatial_size(); }
  cplx& operator()(std::size_t j, std::size_t x) { return data[j * grid.spatial_size() + x]; }
  const cplx& operator()(std::size_t j, std::size_t x) const {
    return data[j * grid.spatial_size() + x];
  }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx a);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx a, Field b);

// One time slice, or a function of x alone.
struct SpatialField {
  SpaceTimeGrid grid;
  std::vector<cplx> data;

  SpatialField() = default;
  explicit SpatialField(const SpaceTimeGrid& g, cplx value = 0.0);

  std::size_t size() const { return data.size(); }
  cplx& operator[](std::size_t x) { return data[x]; }
  const cplx& operator[](std::size_t x) const { return data[x]; }
};

void check_same_grid(const SpaceTimeGrid& a, const SpaceTimeGrid& b);
void check_finite(const Field& u);
void check_finite(const SpatialField& u);

// Discrete L2 pairing sum u conj(v) dt dx^n and its norm.
cplx inner(const Field& u, const Field& v);
double norm(const Field& u);
cplx inner(const SpatialField& u, const SpatialField& v);
double norm(const SpatialField& u);

SpatialField get_slice(const Field& u, std::size_t j);
void set_slice(Field& u, std::size_t j, const SpatialField& s);
// Field constant in time.
Field broadcast(const SpatialField& s);
// Tensor product f(t) g(x).
Field tensor(const std::vector<cplx>& f, const SpatialField& g);

}  // namespace greenop
