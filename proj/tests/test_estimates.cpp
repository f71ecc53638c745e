#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenop/error.hpp"
#include "greenop/estimates.hpp"
#include "greenop/generators.hpp"
#include "greenop/rng.hpp"

using namespace greenop;
using std::numbers::pi;

namespace {

SolverConfig config(double tol) {
  SolverConfig cfg;
  cfg.tol = tol;
  return cfg;
}

std::vector<std::pair<int, int>> window(const SpaceTimeGrid& g, double t0, double t1) {
  std::vector<std::pair<int, int>> p;
  for (int k = 1; k < g.Nt / 2; ++k)
    if (k * g.dt >= t0 - 1e-9 && k * g.dt <= t1 + 1e-9) p.push_back({0, k});
  return p;
}

}  // namespace

TEST_CASE("region masks and torus distance") {
  auto g = make_grid(1, 32, 16.0, 8, 1.0);
  const auto E = RegionMask::box(g, {4.0}, {5.0});
  const auto F = RegionMask::box(g, {0.0}, {1.0});
  CHECK(E.count() == 3);
  CHECK(region_distance(E, F) == doctest::Approx(3.0));
  // A box across the period boundary.
  const auto W = RegionMask::box(g, {15.0}, {17.0});
  CHECK(W.count() == 5);
  CHECK(region_distance(W, E) == doctest::Approx(3.0));
  CHECK(region_distance(E, E) == 0.0);

  auto h = make_grid(2, 16, 8.0, 8, 1.0);
  const auto B = RegionMask::ball(h, {4.0, 4.0}, 1.0);
  CHECK(B.count() == 13);  // radius two cells: 1 + 4 + 4 + 4
  RegionMask none = B;
  std::fill(none.in.begin(), none.in.end(), 0);
  CHECK_THROWS_AS(region_distance(B, none), Error);
}

TEST_CASE("decay fit recovers synthetic parameters") {
  std::vector<double> x, tau, v;
  for (int k = 1; k <= 12; ++k) {
    const double t = 0.25 * k;
    tau.push_back(t);
    x.push_back(9.0 / t);
    v.push_back(2.0 * std::exp(-9.0 / (4.0 * 1.3 * t) + 0.2 * t));
  }
  const auto f = fit_decay(x, tau, v, {0.0, 0.1, 0.2, 0.3});
  CHECK(f.c0 == doctest::Approx(1.3).epsilon(1e-9));
  CHECK(f.omega == doctest::Approx(0.2));
  CHECK(f.C == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.envelope);
}

TEST_CASE("off-diagonal decay of the heat flow") {
  auto g = make_grid(1, 32, 16.0, 64, 8.0);
  const auto c = CoefficientSet::identity(g);
  const auto E = RegionMask::box(g, {4.0}, {5.0});
  const auto F = RegionMask::box(g, {0.0}, {1.0});
  const auto prof = offdiagonal_profile(c, config(1e-6), E, F, window(g, 0.75, 3.5));
  CHECK(prof.fit.slope < 0.0);
  CHECK(prof.fit.r2 >= 0.95);
  CHECK(prof.fit.c0 >= 0.8);
  CHECK(prof.fit.c0 <= 1.3);
  for (const auto& s : prof.samples) CHECK(s.pass);

  // Parabolic scaling (t, x) -> (4t, 2x).
  auto G = make_grid(1, 32, 32.0, 64, 32.0);
  const auto prof2 = offdiagonal_profile(CoefficientSet::identity(G), config(1e-6),
                                         RegionMask::box(G, {8.0}, {10.0}),
                                         RegionMask::box(G, {0.0}, {2.0}), window(G, 3.0, 14.0));
  CHECK(std::abs(prof2.fit.c0 / prof.fit.c0 - 1.0) <= 0.15);

  // E = F: no fit, bounded profile.
  const auto same = offdiagonal_profile(c, config(1e-6), F, F, window(g, 0.75, 2.0));
  CHECK(!same.fit.fitted);
  CHECK(std::isinf(same.fit.c0));
  for (const auto& s : same.samples) CHECK(s.pass);

  const auto far = RegionMask::box(g, {7.0}, {8.0});
  CHECK_THROWS_AS(offdiagonal_profile(c, config(1e-6), far, F, window(g, 0.75, 2.0)), Error);
}

TEST_CASE("Davies conjugation bound") {
  auto g = make_grid(1, 32, 16.0, 64, 8.0);
  const auto c = CoefficientSet::identity(g);
  DecayFit unit;
  unit.C = 1.0;
  unit.c0 = 1.0;
  const auto pairs = window(g, 0.25, 3.0);
  const auto plain = davies_bound_check(c, config(1e-6), {0.0}, pairs, unit);
  CHECK(plain.max_ratio <= 1.0 + 1e-6);
  const auto tilted = davies_bound_check(c, config(1e-6), {0.8}, pairs, unit);
  CHECK(tilted.max_ratio <= 1.1);
  CHECK(tilted.max_ratio > 0.0);
  CHECK(tilted.kappa_used >= tilted.kappa_required - 1e-12);
  const double k1 = davies_required_kappa(1.0, 0.8, 0.0);
  const double k2 = davies_required_kappa(1.0, 1.6, 0.0);
  CHECK((k2 - 1.0) / (k1 - 1.0) == doctest::Approx(4.0));
}

TEST_CASE("Gaussian kernel bound") {
  GaussianBoundParams p;
  const double expected = std::sqrt(32.0 * pi) * std::sqrt(2.0) * std::exp(2.0) * 8.0;
  CHECK(p.mu() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(p.mu() == doctest::Approx(838.2).epsilon(1e-4));

  // Lx = 10 keeps the spectral ringing of a one-cell spike (about
  // e^{-xi_max^2 (t-s)}) far below the bound at the antipodal distance.
  auto g = make_grid(1, 64, 10.0, 64, 8.0);
  const auto c = CoefficientSet::identity(g);
  std::vector<int> targets;
  for (int k = 1; k <= 8; ++k) targets.push_back(k);
  auto stack = propagator_set(c, config(1e-8), 0, targets, PropagatorFlag::fundamental);

  // B measured from a point source away from the source slice.
  SpatialField spike(g);
  spike[32] = 1.0 / g.dx;
  const auto tr = green_column(c, config(1e-8), 0, spike);
  std::vector<LocalCenter> centers;
  for (int j : {10, 14, 20})
    for (std::size_t x : {24u, 32u, 40u}) centers.push_back({j, x});
  p.B = measure_local_bound(tr.data, 0.5, centers, 0);
  p.rho = 1.0;
  const auto rep = gaussian_bound_check(stack, p, true);
  CHECK(rep.violations == 0);
  CHECK(rep.min_ratio > 1.0);
  CHECK(rep.entries == rep.rows.size());

  for (auto& P : stack) P.M *= 10.0 * p.mu() * 1e3;
  CHECK(gaussian_bound_check(stack, p).violations > 0);

  auto back = propagator(c, config(1e-8), 4, 2, PropagatorFlag::fundamental);
  CHECK_THROWS_AS(gaussian_bound_check({back}, p), Error);
}

TEST_CASE("local boundedness constant") {
  auto g = make_grid(1, 32, 16.0, 32, 8.0);
  const Field one(g, 2.0);
  const double r = 1.0;
  const std::vector<LocalCenter> centers{{20, 10}};
  // Q_2r holds ceil(4 r^2 / dt) slices and the points within 2r.
  const int slices = static_cast<int>(std::ceil(4.0 * r * r / g.dt));
  const int points = 2 * static_cast<int>(2.0 * r / g.dx) + 1;
  const double vol = slices * g.dt * points * g.dx;
  CHECK(measure_local_bound(one, r, centers) ==
        doctest::Approx(std::sqrt(std::pow(r, 3) / vol)).epsilon(1e-12));
  CHECK_THROWS_AS(measure_local_bound(one, 0.6, centers), Error);
  CHECK_THROWS_AS(measure_local_bound(one, r, {{3, 10}}, 0), Error);

  // Heat evolution of a point-like source under refinement.
  std::vector<double> B;
  for (int N : {64, 128}) {
    auto h = make_grid(1, N, 16.0, N, 8.0);
    SpatialField spike(h);
    spike[N / 2] = 1.0 / h.dx;
    const auto tr = green_column(CoefficientSet::identity(h), config(1e-8), 0, spike);
    std::vector<LocalCenter> cs;
    for (double t : {1.5, 2.0, 2.5})
      for (double x : {6.0, 8.0, 10.0})
        cs.push_back({static_cast<int>(std::lround(t / h.dt)),
                      static_cast<std::size_t>(std::lround(x / h.dx))});
    B.push_back(measure_local_bound(tr.data, 0.5, cs, 0));
  }
  CHECK(std::isfinite(B[0]));
  CHECK(std::abs(B[1] / B[0] - 1.0) <= 0.15);
}

TEST_CASE("Coulomb scenario") {
  auto g = make_grid(3, 16, 2.0 * pi, 8, 1.0);
  const auto zero = coulomb_scenario(g, 0.0);
  CHECK(zero.ratio == doctest::Approx(1.0));
  CHECK(zero.probe_ratio == doctest::Approx(1.0));
  CHECK(zero.pass);
  double prev = -INFINITY;
  for (int k = 0; k <= 9; ++k) {
    const double rc = -1.0 + k / 9.0;
    const auto r = coulomb_scenario(g, rc);
    CHECK(r.ratio >= prev);
    CHECK(r.probe_ratio >= r.ratio - 1e-9);
    prev = r.ratio;
  }
  CHECK(coulomb_scenario(g, -0.125).ratio >= 0.5 - 0.1);
  CHECK(!coulomb_scenario(g, -1.0).pass);
  CHECK_THROWS_AS(coulomb_scenario(make_grid(2, 16, 1.0, 8, 1.0), -0.1), Error);

  // The Lanczos range matches a direct Rayleigh quotient for a probe.
  const auto V = coulomb_potential(g, coulomb_default_cap(g));
  const auto [lo, hi] = hardy_quotient_range(V);
  CHECK(lo >= 0.0);
  CHECK(hi > lo);
}
