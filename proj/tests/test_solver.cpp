#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/multiplier.hpp"
#include "greenop/norms.hpp"
#include "greenop/rng.hpp"
#include "greenop/solver.hpp"

using namespace greenop;
using std::numbers::pi;

namespace {

double rel(const Field& a, const Field& b) { return norm(a - b) / std::max(norm(b), 1e-300); }

CoefficientSet random_coefficients(const SpaceTimeGrid& g, std::uint64_t seed, double lower) {
  Rng rng(seed);
  auto c = CoefficientSet::identity(g);
  const int n = g.n;
  auto field = [&](double scale, cplx shift) {
    Field f = band_limited_field(g, rng.next(), 2, 2, false);
    double m = 0.0;
    for (const auto& z : f.data) m = std::max(m, std::abs(z));
    for (auto& z : f.data) z = shift + scale / m * z;
    return CoeffField::full(f);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c.A[i * n + j] = field(0.1, i == j ? cplx(1.0) : cplx(0.0));
  for (int i = 0; i < n; ++i) {
    c.avec[i] = field(lower, 0.0);
    c.bvec[i] = field(lower, 0.0);
  }
  c.a0 = field(lower, 0.0);
  return c;
}

}  // namespace

TEST_CASE("solve_heat") {
  auto g = make_grid(1, 8, 2 * pi, 8, 2 * pi);
  Field mode(g), w(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x) {
      mode(j, x) = std::exp(cplx(0.0, g.time_at(j) + g.coord(x, 0)));
      w(j, x) = cplx(1.0, 1.0) * mode(j, x);
    }
  CHECK(rel(solve_heat(w), mode) < 1e-12);
  CHECK_THROWS_AS(solve_heat(Field(g, 1.0)), Error);

  auto h = make_grid(2, 16, 5.0, 16, 4.0);
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Field r = remove_joint_mean(random_field(h, rng));
    const Field v = solve_heat(r);
    CHECK(rel(time_derivative(v) - laplacian(v), r) < 1e-12);
  }
}

TEST_CASE("heat solution bound with c(0)") {
  // Lt |xi_min|^2 large keeps the periodic time sum close to the integral.
  auto g = make_grid(1, 32, 2 * pi, 128, 64.0);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::vector<Field> F{band_limited_field(g, 900 + seed, 40, 8, true)};
    const Field v = solve_heat(-1.0 * divergence(F));
    double sup = 0.0;
    for (int j = 0; j < g.Nt; ++j) sup = std::max(sup, norm(get_slice(v, j)));
    worst = std::max(worst, sup / norm(F[0]));
  }
  CHECK(worst <= 1.02 * theta_constant(0.0));
}

TEST_CASE("multiplier bound for the heat solution") {
  auto g = make_grid(1, 32, 6.0, 32, 6.0);
  for (double theta : {0.0, 0.5}) {
    const double m = heat_multiplier_sup(g, theta);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Field G = band_limited_field(g, seed, 10, 10, true);
      auto sym = MultiplierSymbol::custom(g, [theta](double tau, double xi2) {
        return std::pow(std::abs(tau), 0.5 * theta) * std::pow(xi2, 0.5 * (1 - theta));
      });
      const Field w = apply_multiplier(G, sym);
      if (norm(remove_joint_mean(w)) == 0.0) continue;
      const Field v = solve_heat(w);
      CHECK(vdot_norm(v).multiplier <= m * norm(G) * (1 + 1e-12));
    }
  }
}

TEST_CASE("theta constant") {
  CHECK(theta_constant(0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(std::abs(theta_constant(0.0) - std::sqrt(0.5)) < 1e-8);
  for (double th : {0.1, 0.5, 0.9}) {
    const double closed = std::sqrt(1.0 / (2.0 * std::cos(pi * th / 2)));
    CHECK(std::abs(theta_constant(th) - closed) < 1e-8);
    CHECK(std::abs(theta_constant(th) - theta_constant_alt(th)) < 1e-7);
  }
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double v = theta_constant(0.95 * i / 19.0);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(theta_constant(1.0), Error);
}

TEST_CASE("variational solve on manufactured data") {
  auto g = make_grid(1, 16, 8.0, 16, 8.0);
  const auto id = CoefficientSet::identity(g);
  SolverConfig cfg;
  cfg.tol = 1e-9;
  const Field ustar = band_limited_field(g, 3, 4, 4);
  auto res = solve_variational(id, apply_H(id, ustar), cfg);
  CHECK(res.report.converged);
  CHECK(rel(res.u, ustar) <= 10 * cfg.tol);
  CHECK(res.report.iterations <= 2);
  CHECK(res.report.inverse_bound_ok);

  // Constant coefficients: the preconditioner is exact.
  auto k = id;
  k.A[0] = CoeffField::constant(2.5);
  res = solve_variational(k, apply_H(k, ustar), cfg);
  CHECK(res.report.iterations <= 2);
  CHECK(rel(res.u, ustar) <= 10 * cfg.tol);

  res = solve_variational(id, Field(g), cfg);
  CHECK(norm(res.u) == 0.0);

  // Duhamel and variational agree.
  const Field w = remove_joint_mean(band_limited_field(g, 8, 5, 5));
  CHECK(rel(solve_variational(id, w, cfg).u, solve_heat(w)) <= 10 * cfg.tol);
}

TEST_CASE("variational solve with rough coefficients") {
  auto g = make_grid(2, 16, 6.0, 16, 6.0);
  const auto c = random_coefficients(g, 4, 0.1);
  for (auto mode : {NormMode::homogeneous, NormMode::inhomogeneous}) {
    SolverConfig cfg;
    cfg.tol = 1e-8;
    cfg.mode = mode;
    cfg.kappa = mode == NormMode::inhomogeneous ? 1.0 : 0.0;
    const Field ustar = band_limited_field(g, 5, 4, 4);
    const auto res = solve_variational(c, apply_H(c, ustar, cfg.kappa), cfg);
    CHECK(res.report.converged);
    CHECK(res.report.certificate.has_value());
    CHECK(res.report.inverse_bound_ok);
    CHECK(rel(res.u, ustar) <= 10 * cfg.tol);

    // Linearity.
    const Field f1 = band_limited_field(g, 6, 5, 5), f2 = band_limited_field(g, 7, 5, 5);
    const Field s = solve_variational(c, f1 + f2, cfg).u;
    const Field s12 = solve_variational(c, f1, cfg).u + solve_variational(c, f2, cfg).u;
    CHECK(rel(s, s12) <= 10 * cfg.tol);

    // Double duality with the backward adjoint problem.
    const cplx a = inner(solve_variational(c, f1, cfg).u, f2);
    const cplx b = inner(f1, solve_variational(c, f2, cfg, Direction::backward).u);
    CHECK(std::abs(a - b) <= 10 * cfg.tol * std::abs(a));
  }
}

TEST_CASE("solver gates") {
  auto g = make_grid(2, 8, 1.0, 8, 1.0);
  auto c = CoefficientSet::identity(g);
  c.A = {CoeffField::constant(1.0), CoeffField::constant(cplx(0, 1)),
         CoeffField::constant(cplx(0, -1)), CoeffField::constant(1.0)};
  SolverConfig cfg;
  CHECK_THROWS_AS(solve_variational(c, Field(g), cfg), Error);
  cfg.force = true;
  CHECK_NOTHROW(solve_variational(c, Field(g), cfg));

  // Iteration cap: best iterate is returned and flagged.
  auto r = random_coefficients(make_grid(1, 16, 4.0, 16, 4.0), 2, 0.2);
  SolverConfig capped;
  capped.max_iter = 1;
  capped.tol = 1e-12;
  const auto res = solve_variational(r, band_limited_field(r.grid, 1, 4, 4), capped);
  CHECK_FALSE(res.report.converged);
  CHECK(res.report.iterations == 1);
}

TEST_CASE("energy identity") {
  auto run = [](int N, bool polarized) {
    auto g = make_grid(1, 32, 2 * pi, N, 2 * pi);
    Field src(g), src2(g);
    for (int j = 0; j < g.Nt; ++j)
      for (std::size_t x = 0; x < g.spatial_size(); ++x) {
        const double t = g.time_at(j), y = g.coord(x, 0);
        src(j, x) = std::exp(std::sin(t)) * std::sin(y) + 0.5 * std::sin(2 * t) * std::cos(2 * y);
        src2(j, x) = std::exp(std::cos(2 * t)) * std::cos(y) + 0.3 * std::cos(t + y);
      }
    const Field u = solve_heat(src), ut = solve_heat(src2);
    auto flux = [](const Field& v) {
      auto F = gradient(v);
      for (auto& f : F) f *= -1.0;
      return F;
    };
    const int s = 0, e = 3 * N / 4;
    if (polarized) return energy_identity_polarized(u, flux(u), src, ut, flux(ut), src2, s, e);
    return energy_identity_residual(u, flux(u), src, Field(g), s, e);
  };
  for (bool pol : {false, true}) {
    const double r1 = run(32, pol), r2 = run(64, pol), r3 = run(128, pol);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.15));
  }
  auto g = make_grid(1, 16, 1.0, 16, 1.0);
  Field c(g);
  for (std::size_t x = 0; x < g.spatial_size(); ++x)
    for (int j = 0; j < g.Nt; ++j) c(j, x) = std::sin(2 * pi * g.time_at(j));
  std::vector<Field> zero{Field(g)};
  const Field k(g, 2.0);
  CHECK(energy_identity_residual(k, zero, Field(g), Field(g), 2, 9) == 0.0);
  CHECK_THROWS_AS(energy_identity_residual(c, zero, Field(g), Field(g), 2, 9), Error);
}
