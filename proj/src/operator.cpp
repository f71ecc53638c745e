#include "greenop/operator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/kernels.hpp"
#include "greenop/norms.hpp"
#include "greenop/rng.hpp"

namespace greenop {

namespace {

// e^z - 1 without cancellation for small |z|.
cplx cexpm1(cplx z) {
  const double b = z.imag();
  const cplx eib(std::cos(b), std::sin(b));
  const double s = std::sin(0.5 * b);
  return std::expm1(z.real()) * eib + cplx(-2.0 * s * s, std::sin(b));
}

}  // namespace

std::vector<cplx> time_symbol(const SpaceTimeGrid& g, TimeScheme scheme, double kappa,
                              Direction dir) {
  const double sign = dir == Direction::forward ? 1.0 : -1.0;
  std::vector<cplx> out(g.Nt);
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = sign * g.tau(k);
    if (scheme == TimeScheme::spectral) {
      out[k] = cplx(kappa, tau);
    } else {
      out[k] = -cexpm1(-cplx(kappa, tau) * g.dt) / g.dt;
    }
  }
  return out;
}

namespace {

// Pointwise flux and lower-order term of L (or L*) at every lattice point.
struct FluxResult {
  std::vector<Field> flux;
  Field lower;
};

FluxResult flux_from(const CoefficientSet& c, const Field& u, const std::vector<Field>& grad,
                     bool adjoint, bool principal) {
  check_same_grid(c.grid, u.grid);
  const auto& g = u.grid;
  const int n = g.n;
  FluxResult r;
  r.flux.assign(n, Field(g));
  r.lower = Field(g);

  std::vector<kernels::CoefView> A(n * n), av(n), bv(n);
  for (int i = 0; i < n * n; ++i) A[i] = principal ? c.A[i].view() : kernels::CoefView{};
  for (int i = 0; i < n; ++i) {
    av[i] = c.avec[i].view();
    bv[i] = c.bvec[i].view();
  }
  std::vector<const cplx*> gp(n);
  std::vector<cplx*> fp(n);
  for (int i = 0; i < n; ++i) {
    gp[i] = grad[i].data.data();
    fp[i] = r.flux[i].data.data();
  }
  kernels::FluxArgs args;
  args.n = n;
  args.Nt = g.Nt;
  args.S = g.spatial_size();
  args.A = A.data();
  args.avec = av.data();
  args.bvec = bv.data();
  args.a0 = c.a0.view();
  args.adjoint = adjoint;
  args.u = u.data.data();
  args.g = gp.data();
  args.flux = fp.data();
  args.lower = r.lower.data.data();
  kernels::omp::flux(args);
  return r;
}

FluxResult compute_flux(const CoefficientSet& c, const Field& u, bool adjoint, bool principal) {
  return flux_from(c, u, gradient(u), adjoint, principal);
}

void multiply_slices(Field& u, const std::vector<cplx>& sym, double sign = 1.0) {
  const std::size_t S = u.grid.spatial_size();
  const long Nt = u.grid.Nt;
#pragma omp parallel for schedule(static)
  for (long j = 0; j < Nt; ++j) {
    cplx* s = u.slice(j);
    for (std::size_t x = 0; x < S; ++x) s[x] *= sign * sym[x];
  }
}

void validate_shapes(const CoefficientSet& c) {
  const int n = c.grid.n;
  require(static_cast<int>(c.A.size()) == n * n && static_cast<int>(c.avec.size()) == n &&
              static_cast<int>(c.bvec.size()) == n,
          ErrorKind::grid_mismatch, "coefficient shapes do not match the grid dimension");
}

cplx time_pairing(const Field& u, const Field& v, const std::vector<cplx>& sym) {
  const Field uh = forward_transform(u);
  const Field vh = forward_transform(v);
  const auto& g = u.grid;
  const std::size_t S = g.spatial_size();
  cplx acc = 0.0;
  for (int k = 0; k < g.Nt; ++k)
    acc += sym[k] * kernels::omp::dot(S, uh.slice(k), vh.slice(k));
  return acc / g.volume();
}

cplx weak_form(const CoefficientSet& c, const Field& u, const Field& v, bool adjoint) {
  const auto r = compute_flux(c, u, adjoint, true);
  const auto gv = gradient(v);
  cplx acc = inner(r.lower, v);
  for (int i = 0; i < u.grid.n; ++i) acc += inner(r.flux[i], gv[i]);
  return acc;
}

}  // namespace

Field apply_L_spectral(const CoefficientSet& c, const Field& uxi, bool adjoint) {
  validate_shapes(c);
  const auto& g = uxi.grid;
  const int n = g.n;
  std::vector<std::vector<cplx>> sym(n);
  std::vector<Field> grad;
  for (int i = 0; i < n; ++i) {
    sym[i] = derivative_symbol(g, i);
    Field d = uxi;
    multiply_slices(d, sym[i]);
    spatial_inverse(d);
    grad.push_back(std::move(d));
  }
  Field u = uxi;
  spatial_inverse(u);
  auto r = flux_from(c, u, grad, adjoint, true);
  Field out = std::move(r.lower);
  spatial_forward(out);
  for (int i = 0; i < n; ++i) {
    spatial_forward(r.flux[i]);
    multiply_slices(r.flux[i], sym[i], -1.0);
    out += r.flux[i];
  }
  return out;
}

Field apply_L(const CoefficientSet& c, const Field& u, bool adjoint) {
  Field uxi = u;
  spatial_forward(uxi);
  Field out = apply_L_spectral(c, uxi, adjoint);
  spatial_inverse(out);
  return out;
}

Field apply_H(const CoefficientSet& c, const Field& u, double kappa, TimeScheme scheme,
              Direction dir) {
  Field out = apply_L(c, u, dir == Direction::backward);
  const auto sym = time_symbol(u.grid, scheme, kappa, dir);
  Field uh = u;
  time_forward(uh);
  const std::size_t S = u.grid.spatial_size();
  for (int k = 0; k < u.grid.Nt; ++k) kernels::omp::scale(S, sym[k], uh.slice(k));
  time_inverse(uh);
  out += uh;
  return out;
}

cplx pairing(const CoefficientSet& c, const Field& u, const Field& v, TimeScheme scheme) {
  validate_shapes(c);
  check_same_grid(u.grid, v.grid);
  return time_pairing(u, v, time_symbol(u.grid, scheme, 0.0, Direction::forward)) +
         weak_form(c, u, v, false);
}

cplx pairing_adjoint(const CoefficientSet& c, const Field& u, const Field& v, TimeScheme scheme) {
  validate_shapes(c);
  check_same_grid(u.grid, v.grid);
  return time_pairing(u, v, time_symbol(u.grid, scheme, 0.0, Direction::backward)) +
         weak_form(c, u, v, true);
}

cplx beta_pairing(const CoefficientSet& c, const Field& u, const Field& v) {
  validate_shapes(c);
  check_same_grid(u.grid, v.grid);
  const auto r = compute_flux(c, u, false, false);
  const auto gv = gradient(v);
  cplx acc = inner(r.lower, v);
  for (int i = 0; i < u.grid.n; ++i) acc += inner(r.flux[i], gv[i]);
  return acc;
}

EllipticityBounds garding_constants(const CoefficientSet& c) {
  validate_shapes(c);
  const auto& g = c.grid;
  const int n = g.n;
  bool any_full = false, any_spatial = false;
  for (const auto& a : c.A) {
    any_full |= a.storage() == CoeffField::Storage::full;
    any_spatial |= a.storage() == CoeffField::Storage::spatial;
  }
  const std::size_t S = g.spatial_size();
  const std::size_t points = any_full ? g.Nt * S : (any_spatial ? S : 1);
  double lam = std::numeric_limits<double>::infinity();
  double Lam = 0.0;
#pragma omp parallel for schedule(static) reduction(min : lam) reduction(max : Lam)
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t t = any_full ? p / S : 0;
    const std::size_t x = any_full ? p % S : p;
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = c.Aij(i, j).at(t, x);
    const Eigen::MatrixXcd herm = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    lam = std::min(lam, es.eigenvalues().minCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ns(M.adjoint() * M, Eigen::EigenvaluesOnly);
    Lam = std::max(Lam, std::sqrt(std::max(ns.eigenvalues().maxCoeff(), 0.0)));
  }
  EllipticityBounds b;
  // Round-off in the eigen-solve should not flip an exact zero.
  b.lambda = std::abs(lam) < 1e-14 ? 0.0 : lam;
  b.Lambda = Lam;
  return b;
}

namespace {

bool time_dependent(const CoeffField& f) { return f.storage() == CoeffField::Storage::full; }
bool is_const(const CoeffField& f) { return f.storage() == CoeffField::Storage::constant; }

template <class Fn>
CoeffField build(const SpaceTimeGrid& g, bool full, bool constant, Fn fn) {
  if (constant) return CoeffField::constant(fn(0, 0));
  if (!full) {
    SpatialField s(g);
    for (std::size_t x = 0; x < s.size(); ++x) s[x] = fn(0, x);
    return CoeffField::spatial(s);
  }
  Field f(g);
  for (int t = 0; t < g.Nt; ++t)
    for (std::size_t x = 0; x < g.spatial_size(); ++x) f(t, x) = fn(t, x);
  return CoeffField::full(f);
}

CoefficientSet conjugate_impl(const CoefficientSet& c, const std::vector<CoeffField>& grad) {
  validate_shapes(c);
  const auto& g = c.grid;
  const int n = g.n;
  bool full = false, constant = true;
  auto note = [&](const CoeffField& f) {
    full |= time_dependent(f);
    constant &= is_const(f);
  };
  for (const auto& f : c.A) note(f);
  for (const auto& f : c.avec) note(f);
  for (const auto& f : c.bvec) note(f);
  for (const auto& f : grad) note(f);

  CoefficientSet out = c;
  for (int i = 0; i < n; ++i) {
    // a_h = -A grad h, b_h = A^T grad h.
    auto ah = [&](std::size_t t, std::size_t x) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) s -= c.Aij(i, j).at(t, x) * grad[j].at(t, x);
      return c.avec[i].at(t, x) + s;
    };
    auto bh = [&](std::size_t t, std::size_t x) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) s += c.Aij(j, i).at(t, x) * grad[j].at(t, x);
      return c.bvec[i].at(t, x) + s;
    };
    out.avec[i] = build(g, full, constant, ah);
    out.bvec[i] = build(g, full, constant, bh);
  }
  // a0_h = -grad h . A grad h + (a - b) . grad h.
  const bool a0_full = full || time_dependent(c.a0);
  const bool a0_const = constant && is_const(c.a0);
  out.a0 = build(g, a0_full, a0_const, [&](std::size_t t, std::size_t x) {
    cplx s = c.a0.at(t, x);
    for (int i = 0; i < n; ++i) {
      const cplx gi = grad[i].at(t, x);
      for (int j = 0; j < n; ++j) s -= gi * c.Aij(i, j).at(t, x) * grad[j].at(t, x);
      s += (c.avec[i].at(t, x) - c.bvec[i].at(t, x)) * gi;
    }
    return s;
  });
  return out;
}

}  // namespace

CoefficientSet davies_conjugate(const CoefficientSet& c, const SpatialField& h) {
  double scale = 0.0, imag = 0.0;
  for (const auto& z : h.data) {
    scale = std::max(scale, std::abs(z));
    imag = std::max(imag, std::abs(z.imag()));
  }
  require(imag <= 1e-12 * std::max(scale, 1.0), ErrorKind::invalid_argument,
          "Davies conjugation needs a real-valued h");
  auto grad = gradient(h);
  for (auto& s : grad)
    for (auto& z : s.data) z = z.real();
  return davies_conjugate_gradient(c, grad);
}

CoefficientSet davies_conjugate_gradient(const CoefficientSet& c,
                                         const std::vector<SpatialField>& grad_h) {
  require(static_cast<int>(grad_h.size()) == c.grid.n, ErrorKind::invalid_argument,
          "gradient of h needs n components");
  std::vector<CoeffField> grad;
  for (const auto& s : grad_h) {
    for (const auto& z : s.data)
      require(z.imag() == 0.0, ErrorKind::invalid_argument, "gradient of h must be real");
    grad.push_back(CoeffField::spatial(s));
  }
  return conjugate_impl(c, grad);
}

CoefficientSet davies_conjugate_gradient(const CoefficientSet& c,
                                         const std::vector<double>& zeta) {
  require(static_cast<int>(zeta.size()) == c.grid.n, ErrorKind::invalid_argument,
          "gradient of h needs n components");
  std::vector<CoeffField> grad;
  for (double z : zeta) grad.push_back(CoeffField::constant(z));
  return conjugate_impl(c, grad);
}

double coercivity_ratio(const CoefficientSet& c, const Field& u, double kappa, double delta,
                        NormMode mode, TimeScheme scheme) {
  const auto& g = u.grid;
  const std::size_t S = g.spatial_size();
  Field uh = forward_transform(u);
  Field wh = uh;
  const auto sym = time_symbol(g, scheme, kappa, Direction::forward);
  cplx time_part = 0.0;
  double weight = 0.0, l2 = 0.0;
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = g.tau(k);
    const double sgn = tau > 0 ? 1.0 : (tau < 0 ? -1.0 : 0.0);
    const cplx m(1.0, delta * sgn);
    kernels::omp::scale(S, m, wh.slice(k));
    time_part += sym[k] * kernels::omp::dot(S, uh.slice(k), wh.slice(k));
    const cplx* s = uh.slice(k);
    for (std::size_t x = 0; x < S; ++x) {
      const double a2 = std::norm(s[x]);
      weight += (std::abs(tau) + g.xi_squared(x)) * a2;
      l2 += a2;
    }
  }
  time_part /= g.volume();
  weight /= g.volume();
  l2 /= g.volume();
  const Field w = inverse_transform(wh);
  const cplx space_part = inner(apply_L(c, u), w);
  const double denom = mode == NormMode::homogeneous ? weight : weight + l2;
  require(denom > 0.0, ErrorKind::invalid_argument, "probe has zero norm");
  return (time_part + space_part).real() / denom;
}

CoercivityCertificate coercivity_certificate(const CoefficientSet& c,
                                             const CertificateConfig& cfg) {
  validate_shapes(c);
  require(cfg.probes >= 1, ErrorKind::invalid_argument, "need at least one probe");
  const auto& g = c.grid;
  CoercivityCertificate cert;
  cert.delta = cfg.delta;
  if (cert.delta <= 0.0) {
    const auto b = garding_constants(c);
    cert.delta = b.lambda / (1.0 + b.Lambda);
  }
  cert.threshold = std::isnan(cfg.threshold)
                       ? cert.delta / (cfg.mode == NormMode::homogeneous ? 2.0 : 4.0)
                       : cfg.threshold;
  cert.probes = cfg.probes;
  std::vector<double> ratios(cfg.probes);
  for (int p = 0; p < cfg.probes; ++p) {
    Field u = band_limited_field(g, sub_seed(cfg.seed, p), g.Nt / 4, g.Nx / 4, true);
    const double nv = cfg.mode == NormMode::homogeneous ? vdot_norm(u).multiplier
                                                        : inhomogeneous_norm(u);
    u *= 1.0 / nv;
    ratios[p] = coercivity_ratio(c, u, cfg.kappa, cert.delta, cfg.mode, cfg.scheme);
  }
  cert.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  cert.pass = cert.delta > 0.0 && cert.min_ratio >= cert.threshold;
  return cert;
}

}  // namespace greenop
