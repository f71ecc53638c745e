#include "greenop/generators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "greenop/error.hpp"
#include "greenop/norms.hpp"
#include "greenop/rng.hpp"

namespace greenop {

namespace {

// Smooth unit-scale field; spatial storage when time independent.
Field smooth_field(const SpaceTimeGrid& g, std::uint64_t seed, int kt, int kx, bool time_dependent,
                   bool real) {
  kx = std::clamp(kx, 0, g.Nx / 2 - 1);
  kt = std::clamp(kt, 0, g.Nt / 2 - 1);
  Field f = time_dependent ? band_limited_field(g, seed, kt, kx, false)
                           : broadcast(band_limited_spatial(g, seed, kx, false));
  if (real)
    for (auto& z : f.data) z = z.real();
  return f;
}

CoeffField pack(const Field& f, bool time_dependent) {
  if (time_dependent) return CoeffField::full(f);
  return CoeffField::spatial(get_slice(f, 0));
}

}  // namespace

CoefficientSet random_elliptic(const SpaceTimeGrid& g, double lambda, double Lambda,
                               std::uint64_t seed, const EllipticOptions& opt) {
  require(lambda > 0.0 && Lambda >= lambda, ErrorKind::invalid_argument,
          "random_elliptic needs 0 < lambda <= Lambda");
  const int n = g.n;
  const std::size_t N = g.size();
  CoefficientSet c = CoefficientSet::identity(g);
  if (Lambda == lambda) {
    for (int i = 0; i < n; ++i) c.A[i * n + i] = CoeffField::constant(lambda);
    return c;
  }
  std::vector<Field> B;
  for (int k = 0; k < n * n; ++k)
    B.push_back(smooth_field(g, sub_seed(seed, k), opt.kt, opt.kx, opt.time_dependent, opt.real));

  using Mat = Eigen::MatrixXcd;
  auto at = [&](std::size_t p) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = B[i * n + j].data[p];
    return m;
  };
  double emin = INFINITY, emax = -INFINITY, kmax = 0.0;
  for (std::size_t p = 0; p < N; ++p) {
    const Mat m = at(p);
    const Mat H = 0.5 * (m + m.adjoint());
    const Mat K = 0.5 * (m - m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
    emin = std::min(emin, es.eigenvalues()(0));
    emax = std::max(emax, es.eigenvalues()(n - 1));
    if (!opt.symmetric) {
      Eigen::SelfAdjointEigenSolver<Mat> ks(K.adjoint() * K, Eigen::EigenvaluesOnly);
      kmax = std::max(kmax, std::sqrt(std::max(ks.eigenvalues()(n - 1), 0.0)));
    }
  }
  const double mu = opt.symmetric ? Lambda : lambda + 0.75 * (Lambda - lambda);
  const double hscale = emax > emin ? (mu - lambda) / (emax - emin) : 0.0;
  const double kscale = kmax > 0.0 ? (Lambda - mu) / kmax : 0.0;

  std::vector<Field> A(n * n, Field(g));
  for (std::size_t p = 0; p < N; ++p) {
    const Mat m = at(p);
    Mat H = 0.5 * (m + m.adjoint());
    H -= emin * Mat::Identity(n, n);
    Mat out = lambda * Mat::Identity(n, n) + hscale * H;
    if (!opt.symmetric) out += kscale * 0.5 * (m - m.adjoint());
    for (int k = 0; k < n * n; ++k) A[k].data[p] = out(k / n, k % n);
  }
  for (int k = 0; k < n * n; ++k) c.A[k] = pack(A[k], opt.time_dependent);
  return c;
}

CoefficientSet random_lower_order(const CoefficientSet& base, double P_target,
                                  const ExponentPair& pair, std::uint64_t seed,
                                  const LowerOrderOptions& opt) {
  require(P_target >= 0.0, ErrorKind::invalid_argument, "P_target must be nonnegative");
  require(opt.drift_a || opt.drift_b || opt.potential, ErrorKind::invalid_argument,
          "no lower-order term selected");
  const auto& g = base.grid;
  const int n = g.n;
  CoefficientSet c = base;
  std::uint64_t stream = 100;
  auto draw = [&]() {
    return CoeffField::full(smooth_field(g, sub_seed(seed, stream++), opt.kt, opt.kx, true, false));
  };
  for (int i = 0; i < n; ++i) {
    if (opt.drift_a) c.avec[i] = draw();
    if (opt.drift_b) c.bvec[i] = draw();
  }
  if (opt.potential) c.a0 = draw();
  // Only the drawn part is measured; base lower order is replaced.
  CoefficientSet probe = CoefficientSet::identity(g);
  probe.avec = c.avec;
  probe.bvec = c.bvec;
  probe.a0 = c.a0;
  const double P = coefficient_size(probe, pair, opt.lorentz);
  require(P > 0.0 && std::isfinite(P), ErrorKind::invalid_argument,
          "random lower-order terms have zero size");
  // The size is positively homogeneous of degree one.
  const double s = P_target / P;
  auto scale = [&](CoeffField& f) {
    Field u = f.to_field(g);
    u *= s;
    f = CoeffField::full(u);
  };
  for (auto& f : c.avec)
    if (!f.is_zero()) scale(f);
  for (auto& f : c.bvec)
    if (!f.is_zero()) scale(f);
  if (!c.a0.is_zero()) scale(c.a0);
  return c;
}

double coulomb_default_cap(const SpaceTimeGrid& g) { return 16.0 / (g.dx * g.dx); }

SpatialField coulomb_potential(const SpaceTimeGrid& g, double M) {
  require(M > 0.0, ErrorKind::invalid_argument, "cap must be positive");
  SpatialField V(g);
  int idx[3];
  for (std::size_t x = 0; x < V.size(); ++x) {
    g.unravel(x, idx);
    double r2 = 0.0;
    for (int c = 0; c < g.n; ++c) {
      double d = std::abs(idx[c] * g.dx - 0.5 * g.Lx);
      d = std::min(d, g.Lx - d);
      r2 += d * d;
    }
    V[x] = r2 > 0.0 ? std::min(1.0 / r2, M) : M;
  }
  return V;
}

CoefficientSet coulomb(const SpaceTimeGrid& g, cplx c, double M) {
  CoefficientSet out = CoefficientSet::identity(g);
  SpatialField V = coulomb_potential(g, M);
  for (auto& z : V.data) z *= c;
  out.a0 = CoeffField::spatial(V);
  return out;
}

CoefficientSet checkerboard(const SpaceTimeGrid& g, double contrast) {
  require(contrast > 0.0, ErrorKind::invalid_argument, "contrast must be positive");
  CoefficientSet out = CoefficientSet::identity(g);
  SpatialField a(g);
  int idx[3];
  for (std::size_t x = 0; x < a.size(); ++x) {
    g.unravel(x, idx);
    int parity = 0;
    for (int c = 0; c < g.n; ++c) parity += (2 * idx[c]) / g.Nx;
    a[x] = parity % 2 == 0 ? 1.0 : contrast;
  }
  for (int i = 0; i < g.n; ++i) out.A[i * g.n + i] = CoeffField::spatial(a);
  return out;
}

}  // namespace greenop
