#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/norms.hpp"
#include "greenop/operator.hpp"
#include "greenop/rng.hpp"

using namespace greenop;
using std::numbers::pi;

namespace {

CoeffField random_coeff(const SpaceTimeGrid& g, Rng& rng, double scale, cplx shift = 0.0,
                        bool real = false) {
  Field f = band_limited_field(g, rng.next(), 2, 2, false);
  for (auto& z : f.data) {
    if (real) z = z.real();
    z = shift + scale * z;
  }
  return CoeffField::full(f);
}

CoefficientSet random_coefficients(const SpaceTimeGrid& g, Rng& rng, bool real = false) {
  auto c = CoefficientSet::identity(g);
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c.A[i * n + j] = random_coeff(g, rng, 0.1, i == j ? 1.0 : 0.0, real);
  for (int i = 0; i < n; ++i) {
    c.avec[i] = random_coeff(g, rng, 0.3, 0.0, real);
    c.bvec[i] = random_coeff(g, rng, 0.3, 0.0, real);
  }
  c.a0 = random_coeff(g, rng, 0.3, 0.0, real);
  return c;
}

double rel(const Field& a, const Field& b) { return norm(a - b) / std::max(norm(b), 1e-300); }

Field exp_field(const SpatialField& h, double sign) {
  SpatialField e(h.grid);
  for (std::size_t x = 0; x < h.size(); ++x) e[x] = std::exp(sign * h[x].real());
  Field out = broadcast(e);
  return out;
}

Field pointwise(const Field& a, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

}  // namespace

TEST_CASE("apply_L examples") {
  auto g = make_grid(2, 8, 2 * pi, 8, 2 * pi);
  auto c = CoefficientSet::identity(g);
  Field u(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x)
      u(j, x) = std::exp(cplx(0.0, g.coord(x, 0)));
  CHECK(rel(apply_L(c, u), u) < 1e-12);
  CHECK(norm(apply_L(c, Field(g))) == 0.0);

  Rng rng(1);
  auto s = random_coefficients(g, rng, true);
  s.A[1] = s.A[2];
  s.bvec = s.avec;
  s.a0 = CoeffField::constant(0.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Field v = random_field(g, rng);
    const cplx q = inner(apply_L(s, v), v);
    CHECK(std::abs(q.imag()) < 1e-10 * std::abs(q));
  }
}

TEST_CASE("adjoint duality of L and H") {
  auto g = make_grid(2, 8, 3.0, 8, 2.0);
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = random_coefficients(g, rng);
    const Field u = random_field(g, rng), v = random_field(g, rng);
    for (auto scheme : {TimeScheme::spectral, TimeScheme::causal_euler}) {
      const cplx a = pairing(c, u, v, scheme);
      const cplx b = std::conj(pairing_adjoint(c, v, u, scheme));
      CHECK(std::abs(a - b) < 1e-10 * std::abs(a));
    }
    const cplx l = inner(apply_L(c, u), v);
    const cplx la = std::conj(inner(apply_L(c, v, true), u));
    CHECK(std::abs(l - la) < 1e-10 * std::abs(l));
    // The weak pairing agrees with the strong operator.
    const cplx h = inner(apply_H(c, u), v);
    CHECK(std::abs(h - pairing(c, u, v)) < 1e-10 * std::abs(h));
  }
}

TEST_CASE("pairing structure") {
  auto g = make_grid(1, 16, 4.0, 16, 4.0);
  Rng rng(3);
  const auto id = CoefficientSet::identity(g);
  for (int trial = 0; trial < 10; ++trial) {
    const Field u = random_field(g, rng);
    double grad2 = 0.0;
    for (const auto& d : gradient(u)) grad2 += std::pow(norm(d), 2);
    CHECK(pairing(id, u, u).real() == doctest::Approx(grad2).epsilon(1e-10));
    const cplx dt = inner(time_derivative(u), u);
    CHECK(std::abs(dt.real()) < 1e-10 * std::pow(norm(u), 2));
  }
  // Disjoint time supports: the lower-order part vanishes.
  const auto c = random_coefficients(g, rng);
  Field u(g), v(g);
  for (std::size_t x = 0; x < g.spatial_size(); ++x) {
    u(2, x) = rng.complex_normal();
    v(9, x) = rng.complex_normal();
  }
  CHECK(std::abs(beta_pairing(c, u, v)) < 1e-12);
}

TEST_CASE("lower-order pairing bound") {
  auto g = make_grid(2, 16, 4.0, 16, 3.0);
  Rng rng(4);
  const ExponentPair tilde{2, 2};
  const auto conj = conjugate_pair(tilde);
  auto delta_norm = [&](const Field& u) {
    double grad2 = 0.0;
    for (const auto& d : gradient(u)) grad2 += std::pow(norm(d), 2);
    return std::sqrt(grad2) + mixed_lebesgue_norm(u, conj);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = random_coefficients(g, rng);
    const double P = coefficient_size(c, tilde);
    const Field u = random_field(g, rng), v = random_field(g, rng);
    CHECK(std::abs(beta_pairing(c, u, v)) <= P * delta_norm(u) * delta_norm(v) * (1 + 1e-12));
  }
}

TEST_CASE("Garding constants") {
  auto g = make_grid(2, 8, 1.0, 8, 1.0);
  auto c = CoefficientSet::identity(g);
  auto b = garding_constants(c);
  CHECK(b.lambda == doctest::Approx(1.0));
  CHECK(b.Lambda == doctest::Approx(1.0));
  c.A = {CoeffField::constant(2.0), CoeffField::constant(0.0), CoeffField::constant(0.0),
         CoeffField::constant(0.5)};
  b = garding_constants(c);
  CHECK(b.lambda == doctest::Approx(0.5));
  CHECK(b.Lambda == doctest::Approx(2.0));
  c.A = {CoeffField::constant(1.0), CoeffField::constant(cplx(0, 1)),
         CoeffField::constant(cplx(0, -1)), CoeffField::constant(1.0)};
  b = garding_constants(c);
  CHECK(b.lambda == 0.0);
  CHECK_FALSE(b.elliptic());
  CHECK(b.Lambda == doctest::Approx(2.0));
}

TEST_CASE("Davies conjugation") {
  auto g = make_grid(2, 32, 2 * pi, 16, 2 * pi);
  Rng rng(5);
  const auto c = random_coefficients(g, rng);
  const auto same = davies_conjugate(c, SpatialField(g, 3.0));
  const Field u = random_field(g, rng);
  CHECK(rel(apply_L(same, u), apply_L(c, u)) < 1e-12);

  const auto id = CoefficientSet::identity(g);
  const auto aff = davies_conjugate_gradient(id, std::vector<double>{0.5, -0.25});
  CHECK(aff.avec[0].at(0, 0) == cplx(-0.5));
  CHECK(aff.avec[1].at(0, 0) == cplx(0.25));
  CHECK(aff.bvec[0].at(0, 0) == cplx(0.5));
  CHECK(aff.bvec[1].at(0, 0) == cplx(-0.25));
  CHECK(aff.a0.at(0, 0).real() == doctest::Approx(-0.3125));

  SpatialField h(g);
  for (std::size_t x = 0; x < h.size(); ++x)
    h[x] = 0.3 * std::sin(g.coord(x, 0)) + 0.2 * std::cos(g.coord(x, 1) + 0.4);
  const auto ch = davies_conjugate(c, h);
  const Field v = band_limited_field(g, 77, 3, 3);
  const Field lhs = pointwise(exp_field(h, 1.0), apply_H(c, pointwise(exp_field(h, -1.0), v)));
  CHECK(norm(lhs - apply_H(ch, v)) < 1e-8 * norm(v));

  SpatialField bad(g);
  bad[3] = cplx(0.0, 1.0);
  CHECK_THROWS_AS(davies_conjugate(c, bad), Error);
}

TEST_CASE("coercivity certificate") {
  auto g = make_grid(1, 16, 2 * pi, 16, 2 * pi);
  const auto id = CoefficientSet::identity(g);
  CertificateConfig cfg;
  cfg.delta = 0.5;
  cfg.seed = 9;
  const auto cert = coercivity_certificate(id, cfg);
  CHECK(cert.probes == 100);
  CHECK(cert.pass);
  CHECK(cert.min_ratio >= 0.25);
  // Same seed, same answer.
  CHECK(coercivity_certificate(id, cfg).min_ratio == cert.min_ratio);

  // Single mode (tau, xi) = (2, 1): (delta |tau| + |xi|^2) / (|tau| + |xi|^2).
  Field m(g);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < g.spatial_size(); ++x)
      m(j, x) = std::exp(cplx(0.0, 2.0 * g.time_at(j) + g.coord(x, 0)));
  const double r = coercivity_ratio(id, m, 0.0, 0.5, NormMode::homogeneous);
  CHECK(r == doctest::Approx((0.5 * 2 + 1) / 3.0));

  auto big = id;
  big.a0 = CoeffField::constant(5.0);
  double prev = -INFINITY;
  for (double kappa : {0.0, 0.5, 1.0, 4.0}) {
    CertificateConfig k = cfg;
    k.kappa = kappa;
    k.probes = 20;
    const double v = coercivity_certificate(big, k).min_ratio;
    CHECK(v > prev);
    prev = v;
  }
}
