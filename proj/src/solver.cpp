#include "greenop/solver.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/gmres.hpp"
#include "greenop/kernels.hpp"

namespace greenop {

Field solve_heat(const Field& w) {
  Field wh = forward_transform(w);
  const auto& g = w.grid;
  const double zero = std::abs(wh.data[0]);
  double total = 0.0;
  for (const auto& z : wh.data) total = std::max(total, std::abs(z));
  require(zero <= 1e-12 * std::max(total, 1e-300), ErrorKind::invalid_argument,
          "heat datum has mass on the joint zero mode");
  const std::size_t S = g.spatial_size();
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = g.tau(k);
    for (std::size_t x = 0; x < S; ++x) {
      const cplx d(g.xi_squared(x), tau);
      wh(k, x) = (k == 0 && x == 0) ? cplx(0.0) : wh(k, x) / d;
    }
  }
  return inverse_transform(wh);
}

double heat_multiplier_sup(const SpaceTimeGrid& g, double theta) {
  double m = 0.0;
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = std::abs(g.tau(k));
    for (std::size_t x = 0; x < g.spatial_size(); ++x) {
      const double xi2 = g.xi_squared(x);
      if (xi2 == 0.0 || (theta > 0.0 && tau == 0.0)) continue;
      const double v = std::sqrt(tau + xi2) / std::hypot(tau, xi2) * std::pow(tau, 0.5 * theta) *
                       std::pow(xi2, 0.5 * (1.0 - theta));
      m = std::max(m, v);
    }
  }
  return m;
}

double theta_constant(double theta) {
  require(theta >= 0.0 && theta < 1.0, ErrorKind::invalid_argument,
          "c(theta) needs theta in [0,1); the integral diverges otherwise");
  auto f = [theta](double s) { return std::pow(s, theta) / (1.0 + s * s); };
  using boost::math::quadrature::gauss_kronrod;
  const double inner = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-15);
  boost::math::quadrature::exp_sinh<double> es;
  const double outer = es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
  return std::sqrt(2.0 * (inner + outer) / (2.0 * std::numbers::pi));
}

double theta_constant_alt(double theta) {
  require(theta >= 0.0 && theta < 1.0, ErrorKind::invalid_argument,
          "c(theta) needs theta in [0,1); the integral diverges otherwise");
  // int_1^inf s^theta/(1+s^2) ds = int_0^1 s^{-theta}/(1+s^2) ds.
  auto f = [theta](double s) { return (std::pow(s, theta) + std::pow(s, -theta)) / (1.0 + s * s); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double I = ts.integrate(f, 0.0, 1.0);
  return std::sqrt(2.0 * I / (2.0 * std::numbers::pi));
}

namespace {

struct Weights {
  std::vector<double> W, Winv;
  double vol = 1.0;
};

Weights make_weights(const SpaceTimeGrid& g, NormMode mode) {
  const std::size_t S = g.spatial_size();
  Weights w;
  w.W.resize(g.size());
  w.Winv.resize(g.size());
  w.vol = g.volume();
  const double shift = mode == NormMode::homogeneous ? 0.0 : 1.0;
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = std::abs(g.tau(k));
    for (std::size_t x = 0; x < S; ++x) {
      const double v = std::sqrt(shift + tau + g.xi_squared(x));
      w.W[k * S + x] = v;
      w.Winv[k * S + x] = v == 0.0 ? 0.0 : 1.0 / v;
    }
  }
  return w;
}

double weighted_norm(const Field& uh, const std::vector<double>& w, double vol) {
  double s = 0.0;
  for (std::size_t i = 0; i < uh.size(); ++i) s += w[i] * w[i] * std::norm(uh.data[i]);
  return std::sqrt(s / vol);
}

}  // namespace

double dual_norm(const Field& f, NormMode mode) {
  const auto w = make_weights(f.grid, mode);
  return weighted_norm(forward_transform(f), w.Winv, w.vol);
}

SolveResult solve_variational(const CoefficientSet& c, const Field& f, const SolverConfig& cfg,
                              Direction dir) {
  const auto start = std::chrono::steady_clock::now();
  check_same_grid(c.grid, f.grid);
  require(cfg.tol > 0.0 && cfg.max_iter >= 1 && cfg.kappa >= 0.0, ErrorKind::invalid_argument,
          "invalid solver configuration");
  const auto& g = f.grid;
  const std::size_t S = g.spatial_size();
  const std::size_t N = g.size();

  const auto bounds = garding_constants(c);
  require(cfg.force || bounds.elliptic(), ErrorKind::not_elliptic,
          "coefficients are not elliptic (lambda <= 0)");
  SolveReport report;
  report.delta = cfg.delta > 0.0 ? cfg.delta : bounds.lambda / (1.0 + bounds.Lambda);
  if (cfg.check_certificate && !cfg.force) {
    CertificateConfig cc;
    cc.kappa = cfg.kappa;
    cc.delta = report.delta;
    cc.probes = cfg.certificate_probes;
    cc.seed = cfg.seed;
    cc.mode = cfg.mode;
    cc.scheme = cfg.scheme;
    report.certificate = coercivity_certificate(c, cc);
    require(report.certificate->pass, ErrorKind::not_elliptic,
            "coercivity certificate failed for the requested (kappa, delta)");
  }

  const auto w = make_weights(g, cfg.mode);
  const auto sigma = time_symbol(g, cfg.scheme, cfg.kappa, dir);
  const double lam = bounds.lambda > 0.0 ? bounds.lambda : std::max(bounds.Lambda, 1.0);
  // Right preconditioner M^{-1} W and left scaling W^{-1}; modes where either
  // vanishes are projected out.
  std::vector<cplx> right(N);
  std::vector<double> left(N);
  for (int k = 0; k < g.Nt; ++k)
    for (std::size_t x = 0; x < S; ++x) {
      const std::size_t i = k * S + x;
      const cplx m = sigma[k] + lam * g.xi_squared(x);
      const bool keep = w.W[i] > 0.0 && std::abs(m) > 0.0;
      right[i] = keep ? w.W[i] / m : 0.0;
      left[i] = keep ? w.Winv[i] : 0.0;
    }
  const bool adjoint = dir == Direction::backward;

  Field work(g);
  auto op = [&](const std::vector<cplx>& z, std::vector<cplx>& y) {
    for (std::size_t i = 0; i < N; ++i) work.data[i] = right[i] * z[i];
    Field uxi = work;
    time_inverse(uxi);
    Field Lu = apply_L_spectral(c, uxi, adjoint);
    time_forward(Lu);
    y.resize(N);
    for (int k = 0; k < g.Nt; ++k)
      for (std::size_t x = 0; x < S; ++x) {
        const std::size_t i = k * S + x;
        y[i] = left[i] * (sigma[k] * work.data[i] + Lu.data[i]);
      }
  };

  const Field fh = forward_transform(f);
  std::vector<cplx> b(N), z(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) b[i] = left[i] * fh.data[i];
  const auto gr = gmres(op, b, z, cfg.tol, cfg.max_iter, cfg.restart);
  report.iterations = gr.iterations;
  report.residual = gr.residual;
  report.converged = gr.converged;

  Field uh(g);
  for (std::size_t i = 0; i < N; ++i) uh.data[i] = right[i] * z[i];
  const double fd = weighted_norm(fh, w.Winv, w.vol);
  if (fd > 0.0) {
    report.inverse_bound = weighted_norm(uh, w.W, w.vol) / fd;
    report.inverse_bound_limit = (cfg.mode == NormMode::homogeneous ? 2.0 : 4.0) / report.delta;
    report.inverse_bound_ok = report.inverse_bound <= report.inverse_bound_limit;
  }
  SolveResult out{inverse_transform(uh), report};
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace {

void check_equation(const Field& u, const std::vector<Field>& F, const Field& g, const Field* h) {
  require(static_cast<int>(F.size()) == u.grid.n, ErrorKind::invalid_argument,
          "flux needs n components");
  Field r = time_derivative(u);
  const Field divF = divergence(F);
  r += divF;
  r -= g;
  double scale = norm(divF) + norm(g);
  if (h) {
    r -= *h;
    scale += norm(*h);
  }
  scale = std::max(scale, norm(time_derivative(u)));
  require(norm(r) <= 1e-8 * std::max(scale, 1e-300), ErrorKind::invalid_argument,
          "equation residual above threshold; the energy identity does not apply");
}

double slice_inner_re(const Field& a, const Field& b, int j) {
  return kernels::omp::dot(a.grid.spatial_size(), a.slice(j), b.slice(j)).real() *
         a.grid.spatial_cell();
}

cplx slice_inner(const Field& a, const Field& b, int j) {
  return kernels::omp::dot(a.grid.spatial_size(), a.slice(j), b.slice(j)) * a.grid.spatial_cell();
}

double trapezoid(const std::vector<double>& f, double dt) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += 0.5 * (f[i] + f[i + 1]) * dt;
  return s;
}

cplx trapezoid(const std::vector<cplx>& f, double dt) {
  cplx s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += 0.5 * (f[i] + f[i + 1]) * dt;
  return s;
}

}  // namespace

double energy_identity_residual(const Field& u, const std::vector<Field>& F, const Field& g,
                                const Field& h, int sigma, int tau) {
  const auto& G = u.grid;
  require(0 <= sigma && sigma < tau && tau < G.Nt, ErrorKind::invalid_argument,
          "need 0 <= sigma < tau < Nt");
  check_same_grid(G, g.grid);
  check_same_grid(G, h.grid);
  check_equation(u, F, g, &h);
  const auto gu = gradient(u);
  const Field gh = g + h;
  std::vector<double> e;
  for (int j = sigma; j <= tau; ++j) {
    double s = slice_inner_re(gh, u, j);
    for (int c = 0; c < G.n; ++c) s += slice_inner_re(F[c], gu[c], j);
    e.push_back(2.0 * s);
  }
  const double lhs = slice_inner_re(u, u, tau) - slice_inner_re(u, u, sigma);
  return std::abs(lhs - trapezoid(e, G.dt));
}

double energy_identity_polarized(const Field& u, const std::vector<Field>& F, const Field& g,
                                 const Field& ut, const std::vector<Field>& Ft, const Field& gt,
                                 int sigma, int tau) {
  const auto& G = u.grid;
  require(0 <= sigma && sigma < tau && tau < G.Nt, ErrorKind::invalid_argument,
          "need 0 <= sigma < tau < Nt");
  check_same_grid(G, ut.grid);
  check_equation(u, F, g, nullptr);
  check_equation(ut, Ft, gt, nullptr);
  const auto gu = gradient(u);
  const auto gut = gradient(ut);
  std::vector<cplx> e;
  for (int j = sigma; j <= tau; ++j) {
    cplx s = slice_inner(g, ut, j) + slice_inner(u, gt, j);
    for (int c = 0; c < G.n; ++c) s += slice_inner(F[c], gut[c], j) + slice_inner(gu[c], Ft[c], j);
    e.push_back(s);
  }
  const cplx lhs = slice_inner(u, ut, tau) - slice_inner(u, ut, sigma);
  return std::abs(lhs - trapezoid(e, G.dt));
}

}  // namespace greenop
