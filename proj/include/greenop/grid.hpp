#pragma once

#include <cstddef>
#include <vector>

namespace greenop {

// Periodic space-time lattice of Nt x Nx^n points on [0,Lt) x [0,Lx)^n.
struct SpaceTimeGrid {
  int n = 1;
  int Nx = 8;
  double Lx = 1.0;
  int Nt = 8;
  double Lt = 1.0;
  double dt = 0.125;
  double dx = 0.125;

  std::size_t spatial_size() const;
  std::size_t size() const { return spatial_size() * static_cast<std::size_t>(Nt); }
  double spatial_cell() const;  // dx^n
  double cell_volume() const { return dt * spatial_cell(); }
  double spatial_volume() const;  // Lx^n
  double volume() const { return Lt * spatial_volume(); }

  // Frequencies in transform order: index k maps to k or k - N.
  double tau(std::size_t k) const;
  double xi_axis(std::size_t j) const;
  // Ascending tables, tau_k = 2 pi k / Lt for k = -Nt/2 .. Nt/2-1.
  std::vector<double> tau_table() const;
  std::vector<double> xi_table() const;

  // Multi-index helpers for the row-major spatial layout.
  void unravel(std::size_t x, int* idx) const;
  std::size_t ravel(const int* idx) const;
  double xi_squared(std::size_t x) const;
  double xi_component(std::size_t x, int c) const;

  double time_at(std::size_t j) const { return dt * static_cast<double>(j); }
  double coord(std::size_t x, int c) const;

  bool operator==(const SpaceTimeGrid& o) const;
  bool operator!=(const SpaceTimeGrid& o) const { return !(*this == o); }
};

SpaceTimeGrid make_grid(int n, int Nx, double Lx, int Nt, double Lt);

// Same spatial lattice, different time sampling.
SpaceTimeGrid with_time(const SpaceTimeGrid& g, int Nt, double Lt);

// Signed periodic index difference (j - s) mapped to [-N/2, N/2).
int signed_offset(int j, int s, int N);
// Forward offset (j - s) mod N in [0, N).
int forward_offset(int j, int s, int N);

// Periodic distance between two lattice points.
double torus_distance(const SpaceTimeGrid& g, std::size_t x, std::size_t y);

}  // namespace greenop
