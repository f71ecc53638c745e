#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/field_io.hpp"
#include "greenop/kernels.hpp"
#include "greenop/multiplier.hpp"
#include "greenop/rng.hpp"

using namespace greenop;
using std::numbers::pi;

namespace {

// Direct O(N^2) transform with the continuum weights.
Field naive_forward(const Field& u) {
  const auto& g = u.grid;
  const std::size_t S = g.spatial_size();
  Field out(g);
  for (int k = 0; k < g.Nt; ++k) {
    for (std::size_t m = 0; m < S; ++m) {
      cplx acc = 0.0;
      for (int j = 0; j < g.Nt; ++j) {
        for (std::size_t x = 0; x < S; ++x) {
          double phase = g.tau(k) * g.time_at(j);
          for (int c = 0; c < g.n; ++c) phase += g.xi_component(m, c) * g.coord(x, c);
          acc += u(j, x) * std::exp(cplx(0.0, -phase));
        }
      }
      out(k, m) = acc * g.cell_volume();
    }
  }
  return out;
}

double rel(const Field& a, const Field& b) { return norm(a - b) / std::max(norm(b), 1e-300); }

Field mode_field(const SpaceTimeGrid& g, double tau, double xi) {
  Field u(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x)
      u(j, x) = std::exp(cplx(0.0, tau * g.time_at(j) + xi * g.coord(x, 0)));
  return u;
}

}  // namespace

TEST_CASE("make_grid examples") {
  auto g = make_grid(1, 8, 2 * pi, 8, 2 * pi);
  const auto tau = g.tau_table();
  const auto xi = g.xi_table();
  for (int k = 0; k < 8; ++k) {
    CHECK(tau[k] == doctest::Approx(k - 4));
    CHECK(xi[k] == doctest::Approx(k - 4));
  }
  auto g2 = make_grid(2, 16, 10.0, 32, 20.0);
  CHECK(g2.dt == doctest::Approx(0.625));
  CHECK(g2.dx == doctest::Approx(0.625));
  CHECK_THROWS_AS(make_grid(1, 8, 2 * pi, 7, 2 * pi), Error);
  CHECK_THROWS_AS(make_grid(4, 8, 1, 8, 1), Error);
  CHECK_THROWS_AS(make_grid(1, 4, 1, 8, 1), Error);
}

TEST_CASE("tables are strictly increasing") {
  auto g = make_grid(3, 16, 3.0, 32, 5.0);
  const auto tau = g.tau_table();
  for (std::size_t k = 1; k < tau.size(); ++k) CHECK(tau[k] > tau[k - 1]);
  CHECK(g.cell_volume() > 0);
}

TEST_CASE("forward transform matches a direct sum") {
  for (int n : {1, 2}) {
    auto g = make_grid(n, 8, 3.0, 8, 2.0);
    Rng rng(11 + n);
    Field u = random_field(g, rng);
    CHECK(rel(forward_transform(u), naive_forward(u)) < 1e-12);
  }
}

TEST_CASE("serial and sliced transforms agree") {
  auto g = make_grid(2, 16, 1.0, 32, 1.0);
  Rng rng(3);
  Field u = random_field(g, rng);
  Field a = u, b = u;
  kernels::serial::dft_full(a, -1);
  kernels::omp::dft_full(b, -1);
  CHECK(rel(b, a) < 1e-13);
}

TEST_CASE("constant and pure-mode spectra") {
  auto g = make_grid(1, 8, 2 * pi, 8, 2 * pi);
  Field c(g, cplx(2.0, -1.0));
  Field ch = forward_transform(c);
  for (std::size_t i = 1; i < ch.size(); ++i) CHECK(std::abs(ch.data[i]) < 1e-12);
  CHECK(std::abs(ch.data[0]) > 1.0);

  Field m = forward_transform(mode_field(g, 1.0, 1.0));
  for (int k = 0; k < g.Nt; ++k)
    for (std::size_t x = 0; x < g.spatial_size(); ++x) {
      const bool hit = g.tau(k) == 1.0 && g.xi_axis(x) == 1.0;
      CHECK((std::abs(m(k, x)) > 1.0) == hit);
    }
}

TEST_CASE("round trip and Parseval on random fields") {
  auto g = make_grid(2, 8, 5.0, 16, 3.0);
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Field u = random_field(g, rng);
    Field uh = forward_transform(u);
    CHECK(rel(inverse_transform(uh), u) < 1e-12);
    double spec = 0.0;
    for (const auto& z : uh.data) spec += std::norm(z);
    spec /= g.volume();
    const double phys = norm(u) * norm(u);
    CHECK(std::abs(spec - phys) / phys < 1e-12);
  }
}

TEST_CASE("Hilbert transform of a cosine") {
  auto g = make_grid(1, 16, 4.0, 32, 2 * pi);
  const double tau0 = 3.0;
  Field u(g), expect(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x) {
      const double phi = std::exp(-std::pow(g.coord(x, 0) - 2.0, 2));
      u(j, x) = std::cos(tau0 * g.time_at(j)) * phi;
      expect(j, x) = -std::sin(tau0 * g.time_at(j)) * phi;
    }
  CHECK(rel(apply_multiplier(u, MultiplierSymbol::hilbert_t(g)), expect) < 1e-12);
}

TEST_CASE("multiplier algebra") {
  auto g = make_grid(2, 8, 3.0, 16, 2.0);
  Rng rng(9);
  Field u = remove_time_mean(random_field(g, rng));
  auto d1 = MultiplierSymbol::time_fraction(g, 1.0);
  auto d2 = MultiplierSymbol::time_fraction(g, 2.0);
  CHECK(rel(apply_multiplier(apply_multiplier(u, d1), d1), apply_multiplier(u, d2)) < 1e-12);

  Field w = random_field(g, rng);
  auto W = MultiplierSymbol::vdot_weight(g);
  auto Wi = MultiplierSymbol::vdot_inverse_weight(g);
  CHECK(rel(apply_multiplier(apply_multiplier(w, W), Wi), remove_joint_mean(w)) < 1e-12);

  std::vector<MultiplierSymbol> ms = {d1, MultiplierSymbol::spatial_fraction(g, -0.5),
                                      MultiplierSymbol::hilbert_t(g),
                                      MultiplierSymbol::heat_resolvent(g), W};
  for (std::size_t a = 0; a < ms.size(); ++a)
    for (std::size_t b = a + 1; b < ms.size(); ++b) {
      Field ab = apply_multiplier(apply_multiplier(w, ms[a]), ms[b]);
      Field ba = apply_multiplier(apply_multiplier(w, ms[b]), ms[a]);
      CHECK(rel(ab, ba) < 1e-12);
    }
}

TEST_CASE("Hilbert transform is skew and isometric off tau = 0") {
  auto g = make_grid(1, 16, 3.0, 32, 4.0);
  Rng rng(21);
  auto H = MultiplierSymbol::hilbert_t(g);
  for (int trial = 0; trial < 20; ++trial) {
    Field u = random_field(g, rng);
    Field Hu = apply_multiplier(u, H);
    const double u2 = norm(u) * norm(u);
    CHECK(std::abs(inner(Hu, u).real()) < 1e-10 * u2);
    CHECK(std::abs(norm(Hu) - norm(remove_time_mean(u))) < 1e-12 * norm(u));
  }
}

TEST_CASE("time derivative factorizes through D^{1/2} H D^{1/2}") {
  auto g = make_grid(2, 8, 2.0, 32, 3.0);
  Rng rng(4);
  Field u = random_field(g, rng);
  auto half = MultiplierSymbol::time_fraction(g, 0.5);
  Field f = apply_multiplier(
      apply_multiplier(apply_multiplier(u, half), MultiplierSymbol::hilbert_t(g)), half);
  CHECK(norm(time_derivative(u) - f) < 1e-10 * norm(u) * 32);
  // Relative to the derivative's own scale as well.
  CHECK(rel(f, time_derivative(u)) < 1e-12);
}

TEST_CASE("gradient and divergence") {
  auto g = make_grid(1, 16, 2 * pi, 8, 1.0);
  Field u(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x)
      u(j, x) = std::exp(cplx(0.0, g.coord(x, 0)));
  auto gu = gradient(u);
  CHECK(rel(gu[0], cplx(0.0, 1.0) * u) < 1e-12);
  Field c(g, 3.0);
  CHECK(norm(gradient(c)[0]) < 1e-12);

  for (int n : {1, 2, 3}) {
    auto gn = make_grid(n, 8, 1.7, 8, 1.0);
    Rng rng(100 + n);
    for (int trial = 0; trial < 10; ++trial) {
      Field v = random_field(gn, rng);
      std::vector<Field> F;
      for (int k = 0; k < n; ++k) F.push_back(random_field(gn, rng));
      auto gv = gradient(v);
      cplx lhs = 0.0;
      for (int k = 0; k < n; ++k) lhs += inner(gv[k], F[k]);
      const cplx rhs = inner(v, divergence(F));
      double nF = 0;
      for (auto& f : F) nF += norm(f) * norm(f);
      CHECK(std::abs(lhs + rhs) < 1e-10 * norm(v) * std::sqrt(nF));
    }
  }
  std::vector<Field> wrong;
  CHECK_THROWS_AS(divergence(wrong), Error);
}

TEST_CASE("serial and OpenMP kernels agree") {
  Rng rng(77);
  const std::size_t n = 20000;
  std::vector<cplx> x(n), y(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.complex_normal();
    y[i] = rng.complex_normal();
    m[i] = rng.complex_normal();
  }
  CHECK(std::abs(kernels::serial::dot(n, x.data(), y.data()) -
                 kernels::omp::dot(n, x.data(), y.data())) < 1e-10);
  CHECK(kernels::serial::norm2(n, x.data()) ==
        doctest::Approx(kernels::omp::norm2(n, x.data())).epsilon(1e-13));
  CHECK(kernels::serial::max_abs(n, x.data()) == kernels::omp::max_abs(n, x.data()));
  auto a = y, b = y;
  kernels::serial::axpy(n, cplx(0.3, 1.0), x.data(), a.data());
  kernels::omp::axpy(n, cplx(0.3, 1.0), x.data(), b.data());
  CHECK(a == b);
  kernels::serial::multiply(n, m.data(), a.data());
  kernels::omp::multiply(n, m.data(), b.data());
  CHECK(a == b);
}

TEST_CASE("GOF1 round trip") {
  auto g = make_grid(2, 8, 1.5, 8, 2.5);
  Rng rng(8);
  Field u = random_field(g, rng);
  const auto dir = std::filesystem::temp_directory_path();
  const auto p = (dir / "greenop_rt.gof").string();
  write_field(p, u);
  Field v = read_field(p);
  CHECK(v.grid == g);
  CHECK(v.data == u.data);
  SpatialField s = random_spatial_field(g, rng);
  write_spatial_field(p, s);
  SpatialField t = read_spatial_field(p, g);
  CHECK(t.data == s.data);
  CHECK_THROWS_AS(read_field(p), Error);
  std::filesystem::remove(p);
}

TEST_CASE("band-limited fields are grid independent") {
  auto g1 = make_grid(1, 16, 2.0, 16, 3.0);
  auto g2 = make_grid(1, 32, 2.0, 32, 3.0);
  Field a = band_limited_field(g1, 42, 3, 3);
  Field b = band_limited_field(g2, 42, 3, 3);
  for (int j = 0; j < 16; ++j)
    for (int x = 0; x < 16; ++x) CHECK(std::abs(a(j, x) - b(2 * j, 2 * x)) < 1e-12);
}
