#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/exponents.hpp"
#include "greenop/norms.hpp"
#include "greenop/rng.hpp"

using namespace greenop;
using std::numbers::pi;

namespace {

// Independent oracle: plain L^p of samples.
double lp_oracle(const std::vector<cplx>& v, double p, double cell) {
  double s = 0.0;
  for (auto z : v) s += std::pow(std::abs(z), p);
  return std::pow(s * cell, 1.0 / p);
}

Field mode(const SpaceTimeGrid& g, double tau, double xi) {
  Field u(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x)
      u(j, x) = std::exp(cplx(0.0, tau * g.time_at(j) + xi * g.coord(x, 0)));
  return u;
}

// u(R^2 t, R x) sampled on the shrunken grid: identical samples.
Field rescale(const Field& u, double R) {
  Field v = u;
  v.grid = make_grid(u.grid.n, u.grid.Nx, u.grid.Lx / R, u.grid.Nt, u.grid.Lt / (R * R));
  return v;
}

}  // namespace

TEST_CASE("exponent pairs") {
  CHECK(is_admissible({4, 4}, 2));
  CHECK_FALSE(is_admissible({Exponent::infinity(), 2}, 1));
  CHECK_FALSE(is_admissible({Exponent::infinity(), 2}, 2));
  const ExponentPair c{Exponent::infinity(), Exponent::ratio(3, 2)};
  CHECK(is_compatible(c, 3));
  const auto conj = conjugate_pair(c);
  CHECK(conj.r == Exponent(2));
  CHECK(conj.q == Exponent(6));
  CHECK(is_admissible(conj, 3));
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("3/2") == Exponent::ratio(3, 2));
  CHECK(Exponent::parse("1.5") == Exponent::ratio(3, 2));
  CHECK(Exponent::parse("4").value() == 4.0);
  CHECK(Exponent::ratio(3, 2).str() == "3/2");
  CHECK_THROWS_AS(Exponent::parse("1/2"), Error);
  CHECK_THROWS_AS(Exponent::parse("abc"), Error);
}

TEST_CASE("compatibility duality on a rational sweep") {
  int exceptions = 0, compatible = 0;
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 12; ++d)
      for (int a = 0; a <= d; ++a)
        for (int b = 0; b <= d; ++b) {
          const auto p = ExponentPair{Exponent::from_reciprocal({a, d}),
                                      Exponent::from_reciprocal({b, d})};
          if (is_compatible(p, n)) ++compatible;
          if (is_compatible(p, n) != is_admissible(conjugate_pair(p), n)) ++exceptions;
        }
  CHECK(compatible > 0);
  CHECK(exceptions == 0);
}

TEST_CASE("mixed Lebesgue norm") {
  auto g = make_grid(1, 8, 1.0, 8, 1.0);
  Field c(g, cplx(3.0, 4.0));
  CHECK(mixed_lebesgue_norm(c, {2, 2}) == doctest::Approx(5.0));
  Field one(g);
  one(3, 5) = 1.0;
  CHECK(mixed_lebesgue_norm(one, {Exponent::infinity(), Exponent::infinity()}) == 1.0);

  auto h = make_grid(2, 8, 3.0, 16, 2.0);
  Rng rng(7);
  const Field u = random_field(h, rng);
  CHECK(mixed_lebesgue_norm(u, {2, 2}) == doctest::Approx(norm(u)).epsilon(1e-12));
  // Constant in x: the inner norm is |c| Lx^{n/q}.
  Field k(h, 2.0);
  CHECK(mixed_lebesgue_norm(k, {3, 4}) ==
        doctest::Approx(2.0 * std::pow(9.0, 0.25) * std::pow(2.0, 1.0 / 3)));
}

TEST_CASE("Lorentz norm identities") {
  auto g = make_grid(2, 16, 4.0, 8, 1.0);
  const double cell = g.spatial_cell();
  SpatialField ind(g);
  for (int x = 0; x < 37; ++x) ind[x * 5] = 1.0;
  const double m = 37 * cell;
  for (double p : {1.0, 1.5, 2.0, 3.0})
    for (double s : {1.0, 2.0, 4.0, double(INFINITY)})
      CHECK(lorentz_norm(ind, {p, s}, cell) == doctest::Approx(std::pow(m, 1.0 / p)));
  CHECK(lorentz_norm(SpatialField(g), {2, 2}, cell) == 0.0);

  Rng rng(11);
  int monotone_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_spatial_field(g, rng);
    for (double p : {1.0, 2.0, 3.5}) {
      const double lp = lp_oracle(f.data, p, cell);
      CHECK(lorentz_norm(f, {p, p}, cell) == doctest::Approx(lp).epsilon(1e-12));
      double prev = INFINITY;
      for (double s : {1.0, 1.5, 2.0, 3.0, 8.0, double(INFINITY)}) {
        const double v = lorentz_norm(f, {p, s}, cell);
        if (v > prev * (1 + 1e-12)) ++monotone_violations;
        prev = v;
      }
    }
  }
  CHECK(monotone_violations == 0);
}

TEST_CASE("mixed Lorentz norm") {
  auto g = make_grid(1, 32, 6.0, 16, 3.0);
  Rng rng(3);
  const Field u = random_field(g, rng);
  for (auto [r, q] : {std::pair{2.0, 2.0}, {3.0, 1.5}, {4.0, 6.0}}) {
    const double ref = mixed_lebesgue_norm(u, {Exponent::from_double(r), Exponent::from_double(q)});
    CHECK(mixed_lorentz_norm(u, {r, r}, {q, q}) == doctest::Approx(ref).epsilon(1e-12));
  }
  std::vector<cplx> f(g.Nt);
  for (auto& z : f) z = rng.complex_normal();
  const auto s = random_spatial_field(g, rng);
  const Field t = tensor(f, s);
  std::vector<double> fa(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) fa[i] = std::abs(f[i]);
  for (auto [ti, si] : {std::pair{LorentzIndex{2, 4}, LorentzIndex{3, 1}},
                        {LorentzIndex{1.5, INFINITY}, LorentzIndex{4, 2}}}) {
    const double expect = lorentz_norm_abs(fa, ti, g.dt) * lorentz_norm(s, si, g.spatial_cell());
    CHECK(mixed_lorentz_norm(t, ti, si) == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(mixed_lorentz_norm(Field(g), {2, 2}, {2, 2}) == 0.0);
}

TEST_CASE("three-factor Lorentz Hoelder constant is grid independent") {
  // Exponents 1/p: (1/2, 1/3, 1/6); 1/s: (1/2, 1/4, 1/4).
  const LorentzIndex i1{2, 2}, i2{3, 4}, i3{6, 4};
  auto measure = [&](int Nx) {
    auto g = make_grid(2, Nx, 4.0, 8, 1.0);
    const double cell = g.spatial_cell();
    double K = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      const auto f = band_limited_spatial(g, 100 + 3 * trial, 3);
      const auto h1 = band_limited_spatial(g, 101 + 3 * trial, 3);
      const auto h2 = band_limited_spatial(g, 102 + 3 * trial, 3);
      double lhs = 0.0;
      for (std::size_t x = 0; x < f.size(); ++x)
        lhs += std::abs(f[x]) * std::abs(h1[x]) * std::abs(h2[x]) * cell;
      const double rhs =
          lorentz_norm(f, i1, cell) * lorentz_norm(h1, i2, cell) * lorentz_norm(h2, i3, cell);
      K = std::max(K, lhs / rhs);
    }
    return K;
  };
  // Frozen from a measurement on the 16-point grid (rounded up).
  constexpr double K_frozen = 1.0;
  for (int Nx : {16, 32, 64}) CHECK(measure(Nx) <= K_frozen);
}

TEST_CASE("convexity inequality on every grid frequency") {
  auto g = make_grid(2, 16, 5.0, 32, 3.0);
  int violations = 0;
  for (double theta : {0.0, 0.1, 0.25, 0.5, 0.9})
    for (int k = 0; k < g.Nt; ++k)
      for (std::size_t x = 0; x < g.spatial_size(); ++x) {
        const double tau = std::abs(g.tau(k)), xi2 = g.xi_squared(x);
        const double lhs = std::pow(tau, theta) * std::pow(xi2, 1.0 - theta);
        if (lhs > theta * tau + (1 - theta) * xi2) ++violations;
      }
  CHECK(violations == 0);
}

TEST_CASE("Vdot norm two ways") {
  auto g = make_grid(1, 8, 2 * pi, 8, 2 * pi);
  const Field m = mode(g, 1, 1);
  const auto v = vdot_norm(m);
  CHECK(v.multiplier == doctest::Approx(std::sqrt(2.0) * norm(m)));
  CHECK(v.gradient == doctest::Approx(std::sqrt(2.0) * norm(m)));
  const auto c = vdot_norm(Field(g, 3.0));
  CHECK(c.multiplier == doctest::Approx(0.0));
  CHECK(c.gradient == doctest::Approx(0.0));

  auto h = make_grid(2, 16, 3.0, 16, 5.0);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = vdot_norm(random_field(h, rng));
    CHECK(std::abs(r.multiplier - r.gradient) / r.multiplier < 1e-10);
  }
  // Inhomogeneous norm squared splits into L^2 plus Vdot parts.
  const Field u = random_field(h, rng);
  const double full = inhomogeneous_norm(u);
  const double vd = vdot_norm(u).multiplier;
  CHECK(full * full == doctest::Approx(vd * vd + std::pow(norm(u), 2)).epsilon(1e-10));
}

TEST_CASE("H^{-theta} norm") {
  auto g = make_grid(1, 8, 2 * pi, 8, 2 * pi);
  const Field m = mode(g, 1, 1);
  CHECK(h_theta_norm(m, 0.5) == doctest::Approx(norm(m)));
  CHECK_THROWS_AS(h_theta_norm(Field(g, 1.0), 0.0), Error);
  CHECK_THROWS_AS(h_theta_norm(m, 1.0), Error);

  auto h = make_grid(2, 16, 4.0, 16, 4.0);
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Field> F{random_field(h, rng), random_field(h, rng)};
    const double nF = std::sqrt(std::pow(norm(F[0]), 2) + std::pow(norm(F[1]), 2));
    for (auto& f : F) f *= 1.0 / nF;
    CHECK(h_theta_norm(-1.0 * divergence(F), 0.0) <= 1.0 + 1e-12);
  }
}

TEST_CASE("coefficient size") {
  auto g = make_grid(1, 16, 3.0, 16, 2.0);
  auto c = CoefficientSet::identity(g);
  const ExponentPair p{Exponent::ratio(4, 3), 2};
  CHECK(coefficient_size(c, p) == 0.0);
  c.a0 = CoeffField::constant(cplx(0.0, 1.5));
  const double expect = 1.5 * std::pow(2.0, 0.75) * std::pow(3.0, 0.5);
  CHECK(coefficient_size(c, p) == doctest::Approx(expect));
  CHECK_THROWS_AS(coefficient_size(c, ExponentPair{2, 2}), Error);
  // Weak Lorentz of a constant: sup_t t^{1/p} is attained at the full measure.
  CHECK(coefficient_size(c, p, true) == doctest::Approx(expect));
}

TEST_CASE("coefficient size is invariant under parabolic rescaling") {
  auto g = make_grid(3, 8, 4.0, 8, 2.0);
  Rng rng(21);
  auto c = CoefficientSet::identity(g);
  for (auto& v : c.avec) v = CoeffField::full(band_limited_field(g, rng.next(), 2, 2, false));
  for (auto& v : c.bvec) v = CoeffField::full(band_limited_field(g, rng.next(), 2, 2, false));
  c.a0 = CoeffField::full(band_limited_field(g, rng.next(), 2, 2, false));
  const ExponentPair p{Exponent::infinity(), Exponent::ratio(3, 2)};
  const double P = coefficient_size(c, p);
  for (double R : {0.5, 2.0, 3.0}) {
    auto s = CoefficientSet::identity(rescale(Field(g), R).grid);
    for (int i = 0; i < 3; ++i) {
      s.avec[i] = CoeffField::full(rescale(R * c.avec[i].to_field(g), R));
      s.bvec[i] = CoeffField::full(rescale(R * c.bvec[i].to_field(g), R));
    }
    s.a0 = CoeffField::full(rescale((R * R) * c.a0.to_field(g), R));
    CHECK(coefficient_size(s, p) == doctest::Approx(P).epsilon(1e-10));
  }
}

TEST_CASE("epsilon decomposition") {
  auto g = make_grid(1, 16, 2.0, 16, 2.0);
  const ExponentPair p{2, Exponent::infinity()};
  Rng rng(4);
  const Field u = random_field(g, rng);

  auto d = epsilon_decomposition(u, p, 1e-6);
  CHECK(norm(d.small) == 0.0);
  CHECK(d.bounded.data == u.data);

  Field spike(g, 0.5);
  spike(4, 7) = 1e4;
  Field tip(g);
  tip(4, 7) = 1e4;
  d = epsilon_decomposition(spike, p, (1 + 1e-9) * mixed_lebesgue_norm(tip, p));
  CHECK(d.ok);
  CHECK(d.height == doctest::Approx(0.5));
  CHECK(d.small(4, 7) == cplx(1e4));
  CHECK(d.report.P_inf == doctest::Approx(0.5));
  CHECK((d.small + d.bounded).data == spike.data);

  d = epsilon_decomposition(u, p, 2.0 * mixed_lebesgue_norm(u, p));
  CHECK(d.small.data == u.data);
  CHECK(norm(d.bounded) == 0.0);

  // A height cap that the tail cannot respect is reported.
  d = epsilon_decomposition(spike, {Exponent::infinity(), 2}, 1e-3, 1.0);
  CHECK_FALSE(d.ok);
  CHECK_FALSE(d.message.empty());
}

TEST_CASE("Gagliardo-Nirenberg ratio") {
  const ExponentPair p1{8, 4};
  auto g = make_grid(1, 32, 8.0, 32, 4.0);
  Field flat(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x) flat(j, x) = std::sin(2 * pi * j / g.Nt);
  const ExponentPair p2{3, 6};
  CHECK(gagliardo_nirenberg_ratio(flat, {1}, 2, p2) == 0.0);
  CHECK_THROWS_AS(gagliardo_nirenberg_ratio(flat, {0}, 1, {4, 4}), Error);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Field u = band_limited_field(g, seed, 3, 3);
    const Field v = band_limited_field(with_time(make_grid(1, 64, 8.0, 64, 4.0), 64, 4.0), seed, 3, 3);
    const double a = gagliardo_nirenberg_ratio(u, {0}, 1, p1);
    const double b = gagliardo_nirenberg_ratio(v, {0}, 1, p1);
    CHECK(std::isfinite(a));
    CHECK(std::abs(a - b) / b < 0.1);
    for (double R : {0.5, 2.0})
      CHECK(gagliardo_nirenberg_ratio(rescale(u, R), {0}, 1, p1) == doctest::Approx(a).epsilon(0.02));
  }
}

TEST_CASE("Vdot embedding constant is refinement stable") {
  struct Case {
    int n;
    double r, q;
  };
  for (const Case c : {Case{1, 8, 4}, Case{2, 4, 4}, Case{1, 6, 6}}) {
    auto measure = [&](int N) {
      const int n = c.n;
      const double r = c.r, q = c.q;
      auto g = make_grid(n, N, 6.0, N, 6.0);
      double K = 0.0;
      for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Field u = band_limited_field(g, 5000 + seed, 3, 3);
        K = std::max(K, mixed_lorentz_norm(u, LorentzIndex{r, 2}, LorentzIndex{q, 2}) / vdot_norm(u).multiplier);
      }
      return K;
    };
    const double coarse = measure(16), fine = measure(32);
    CHECK(std::abs(fine - coarse) / coarse < 0.1);
  }
}
