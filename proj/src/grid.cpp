#include "greenop/grid.hpp"

#include <cmath>
#include <numbers>

#include "greenop/error.hpp"

namespace greenop {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

double freq(std::size_t k, int N, double L) {
  const long kk = static_cast<long>(k) < N / 2 ? static_cast<long>(k) : static_cast<long>(k) - N;
  return 2.0 * std::numbers::pi * static_cast<double>(kk) / L;
}

}  // namespace

std::size_t SpaceTimeGrid::spatial_size() const {
  std::size_t s = 1;
  for (int c = 0; c < n; ++c) s *= static_cast<std::size_t>(Nx);
  return s;
}

double SpaceTimeGrid::spatial_cell() const { return std::pow(dx, n); }
double SpaceTimeGrid::spatial_volume() const { return std::pow(Lx, n); }

double SpaceTimeGrid::tau(std::size_t k) const { return freq(k, Nt, Lt); }
double SpaceTimeGrid::xi_axis(std::size_t j) const { return freq(j, Nx, Lx); }

std::vector<double> SpaceTimeGrid::tau_table() const {
  std::vector<double> out(Nt);
  for (int k = 0; k < Nt; ++k) out[k] = 2.0 * std::numbers::pi * (k - Nt / 2) / Lt;
  return out;
}

std::vector<double> SpaceTimeGrid::xi_table() const {
  std::vector<double> out(Nx);
  for (int k = 0; k < Nx; ++k) out[k] = 2.0 * std::numbers::pi * (k - Nx / 2) / Lx;
  return out;
}

void SpaceTimeGrid::unravel(std::size_t x, int* idx) const {
  for (int c = n - 1; c >= 0; --c) {
    idx[c] = static_cast<int>(x % Nx);
    x /= Nx;
  }
}

std::size_t SpaceTimeGrid::ravel(const int* idx) const {
  std::size_t x = 0;
  for (int c = 0; c < n; ++c) {
    const int i = ((idx[c] % Nx) + Nx) % Nx;
    x = x * Nx + static_cast<std::size_t>(i);
  }
  return x;
}

double SpaceTimeGrid::xi_squared(std::size_t x) const {
  int idx[3];
  unravel(x, idx);
  double s = 0.0;
  for (int c = 0; c < n; ++c) {
    const double k = xi_axis(idx[c]);
    s += k * k;
  }
  return s;
}

double SpaceTimeGrid::xi_component(std::size_t x, int c) const {
  int idx[3];
  unravel(x, idx);
  return xi_axis(idx[c]);
}

double SpaceTimeGrid::coord(std::size_t x, int c) const {
  int idx[3];
  unravel(x, idx);
  return dx * idx[c];
}

bool SpaceTimeGrid::operator==(const SpaceTimeGrid& o) const {
  return n == o.n && Nx == o.Nx && Nt == o.Nt && Lx == o.Lx && Lt == o.Lt;
}

SpaceTimeGrid make_grid(int n, int Nx, double Lx, int Nt, double Lt) {
  require(n >= 1 && n <= 3, ErrorKind::invalid_argument, "spatial dimension must be 1, 2 or 3");
  require(power_of_two(Nx) && Nx >= 8, ErrorKind::invalid_argument,
          "Nx must be a power of two >= 8");
  require(power_of_two(Nt) && Nt >= 8, ErrorKind::invalid_argument,
          "Nt must be a power of two >= 8");
  require(Lx > 0 && Lt > 0 && std::isfinite(Lx) && std::isfinite(Lt),
          ErrorKind::invalid_argument, "period lengths must be positive");
  SpaceTimeGrid g;
  g.n = n;
  g.Nx = Nx;
  g.Lx = Lx;
  g.Nt = Nt;
  g.Lt = Lt;
  g.dt = Lt / Nt;
  g.dx = Lx / Nx;
  return g;
}

SpaceTimeGrid with_time(const SpaceTimeGrid& g, int Nt, double Lt) {
  return make_grid(g.n, g.Nx, g.Lx, Nt, Lt);
}

int signed_offset(int j, int s, int N) {
  int d = forward_offset(j, s, N);
  if (d >= N / 2) d -= N;
  return d;
}

int forward_offset(int j, int s, int N) { return ((j - s) % N + N) % N; }

double torus_distance(const SpaceTimeGrid& g, std::size_t x, std::size_t y) {
  int a[3], b[3];
  g.unravel(x, a);
  g.unravel(y, b);
  double s = 0.0;
  for (int c = 0; c < g.n; ++c) {
    int d = std::abs(a[c] - b[c]);
    d = std::min(d, g.Nx - d);
    s += (d * g.dx) * (d * g.dx);
  }
  return std::sqrt(s);
}

}  // namespace greenop
