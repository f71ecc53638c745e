#include "greenop/estimates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/generators.hpp"
#include "greenop/norms.hpp"
#include "greenop/rng.hpp"

namespace greenop {

namespace {

double periodic_gap(double a, double L) {
  a = std::fmod(std::abs(a), L);
  return std::min(a, L - a);
}

bool in_periodic_interval(double x, double lo, double hi, double L) {
  if (hi - lo >= L) return true;
  const double eps = 1e-9 * L;
  double d = std::fmod(x - lo, L);
  if (d < 0) d += L;
  if (d > L - eps) d -= L;
  return d >= -eps && d <= hi - lo + eps;
}

}  // namespace

RegionMask RegionMask::box(const SpaceTimeGrid& g, const std::vector<double>& lo,
                           const std::vector<double>& hi) {
  require(static_cast<int>(lo.size()) == g.n && static_cast<int>(hi.size()) == g.n,
          ErrorKind::invalid_argument, "box needs n lower and n upper bounds");
  RegionMask m;
  m.grid = g;
  m.in.assign(g.spatial_size(), 0);
  for (std::size_t x = 0; x < m.in.size(); ++x) {
    bool inside = true;
    for (int c = 0; c < g.n && inside; ++c) {
      require(hi[c] >= lo[c], ErrorKind::invalid_argument, "box bounds out of order");
      inside = in_periodic_interval(g.coord(x, c), lo[c], hi[c], g.Lx);
    }
    m.in[x] = inside;
  }
  return m;
}

RegionMask RegionMask::ball(const SpaceTimeGrid& g, const std::vector<double>& center,
                            double radius) {
  require(static_cast<int>(center.size()) == g.n, ErrorKind::invalid_argument,
          "ball center needs n coordinates");
  RegionMask m;
  m.grid = g;
  m.in.assign(g.spatial_size(), 0);
  for (std::size_t x = 0; x < m.in.size(); ++x) {
    double r2 = 0.0;
    for (int c = 0; c < g.n; ++c) {
      const double d = periodic_gap(g.coord(x, c) - center[c], g.Lx);
      r2 += d * d;
    }
    m.in[x] = r2 <= radius * radius * (1.0 + 1e-12);
  }
  return m;
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
}

double region_distance(const RegionMask& E, const RegionMask& F) {
  check_same_grid(E.grid, F.grid);
  require(!E.empty() && !F.empty(), ErrorKind::invalid_argument, "empty region");
  double d = INFINITY;
  for (std::size_t x = 0; x < E.in.size(); ++x) {
    if (!E.in[x]) continue;
    for (std::size_t y = 0; y < F.in.size(); ++y)
      if (F.in[y]) d = std::min(d, torus_distance(E.grid, x, y));
  }
  return d;
}

DecayFit fit_decay(const std::vector<double>& x, const std::vector<double>& tau,
                   const std::vector<double>& value, const std::vector<double>& omega_grid) {
  const std::size_t N = x.size();
  require(N >= 2 && tau.size() == N && value.size() == N, ErrorKind::invalid_argument,
          "decay fit needs at least two samples");
  require(!omega_grid.empty(), ErrorKind::invalid_argument, "empty omega grid");
  for (double v : value)
    require(v > 0.0 && std::isfinite(v), ErrorKind::invalid_argument,
            "decay samples must be positive");
  DecayFit best;
  double best_sse = INFINITY;
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / N;
  double sxx = 0.0;
  for (double xi : x) sxx += (xi - xm) * (xi - xm);
  require(sxx > 0.0, ErrorKind::invalid_argument, "decay fit needs distinct d^2/(t-s) values");
  for (double omega : omega_grid) {
    std::vector<double> y(N);
    for (std::size_t i = 0; i < N; ++i) y[i] = std::log(value[i]) - omega * tau[i];
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / N;
    double sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      sxy += (x[i] - xm) * (y[i] - ym);
      syy += (y[i] - ym) * (y[i] - ym);
    }
    const double b = sxy / sxx;
    const double a = ym - b * xm;
    double sse = 0.0;
    for (std::size_t i = 0; i < N; ++i) sse += std::pow(y[i] - a - b * x[i], 2);
    if (sse < best_sse * (1.0 - 1e-12)) {
      best_sse = sse;
      best.omega = omega;
      best.slope = b;
      best.intercept = a;
      best.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
      best.stderr_fit = N > 2 ? std::sqrt(sse / static_cast<double>(N - 2)) : 0.0;
    }
  }
  best.fitted = true;
  best.c0 = best.slope < 0.0 ? -1.0 / (4.0 * best.slope) : INFINITY;
  best.C = std::exp(best.intercept + 3.0 * best.stderr_fit);
  best.envelope = true;
  for (std::size_t i = 0; i < N; ++i) {
    const double line = best.intercept + best.slope * x[i] + 3.0 * best.stderr_fit;
    if (std::log(value[i]) - best.omega * tau[i] > line + 1e-12) best.envelope = false;
  }
  return best;
}

namespace {

SpatialField probe_on(const RegionMask& F, Rng& rng) {
  SpatialField p(F.grid);
  for (std::size_t x = 0; x < p.size(); ++x)
    if (F.in[x]) p[x] = rng.complex_normal();
  return p;
}

double restricted_norm(const Field& u, int j, const RegionMask& E) {
  double s = 0.0;
  const std::size_t S = u.grid.spatial_size();
  const cplx* row = u.slice(j);
  for (std::size_t x = 0; x < S; ++x)
    if (E.in[x]) s += std::norm(row[x]);
  return std::sqrt(s * u.grid.spatial_cell());
}

std::vector<double> default_omega_grid(const CoefficientSet& c) {
  const double P = p_infinity(c);
  if (P == 0.0) return {0.0};
  std::vector<double> g;
  for (int k = 0; k <= 8; ++k) g.push_back(k * P * P);
  return g;
}

double positive_offset(const SpaceTimeGrid& g, int s, int t) {
  const int off = signed_offset(t, s, g.Nt);
  require(off > 0, ErrorKind::invalid_argument,
          "pairs need 0 < t - s < Lt/2 on the periodic window");
  return off * g.dt;
}

}  // namespace

OffdiagProfile offdiagonal_profile(const CoefficientSet& c, const SolverConfig& cfg,
                                   const RegionMask& E, const RegionMask& F,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   const OffdiagOptions& opt) {
  const auto& g = c.grid;
  check_same_grid(g, E.grid);
  check_same_grid(g, F.grid);
  require(opt.probes >= 1, ErrorKind::invalid_argument, "need at least one probe");
  require(!pairs.empty(), ErrorKind::invalid_argument, "no (s, t) pairs");
  const double d = region_distance(E, F);
  require(d <= 0.25 * g.Lx, ErrorKind::geometry,
          "d(E,F) exceeds Lx/4; the nearest periodic image is ambiguous");
  std::map<int, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    positive_offset(g, pairs[i].first, pairs[i].second);
    by_source[pairs[i].first].push_back(i);
  }

  GreenSolver solver(c, cfg, Direction::forward);
  OffdiagProfile out;
  out.samples.resize(pairs.size());
  for (const auto& [s, idx] : by_source) {
    Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(s)));
    for (int p = 0; p < opt.probes; ++p) {
      const SpatialField psi = probe_on(F, rng);
      const double pn = norm(psi);
      const Trajectory tr = solver.column(s, psi);
      for (std::size_t i : idx) {
        const int t = pairs[i].second;
        const double tau = positive_offset(g, s, t);
        const double v = std::exp(cfg.kappa * tau) * restricted_norm(tr.data, t, E) / pn;
        auto& smp = out.samples[i];
        smp.s = s;
        smp.t = t;
        smp.dEF = d;
        smp.value = std::max(smp.value, v);
      }
    }
  }

  const auto grid = opt.omega_grid.empty() ? default_omega_grid(c) : opt.omega_grid;
  std::vector<double> x, tau, val;
  for (const auto& smp : out.samples) {
    const double ts = positive_offset(g, smp.s, smp.t);
    x.push_back(d * d / ts);
    tau.push_back(ts);
    val.push_back(std::max(smp.value, 1e-300));
  }
  if (d == 0.0) {
    // No decay to fit: bounded by C e^{omega (t-s)} with omega = 0.
    out.fit.c0 = INFINITY;
    out.fit.C = *std::max_element(val.begin(), val.end());
    out.fit.intercept = std::log(out.fit.C);
    out.fit.envelope = true;
  } else {
    out.fit = fit_decay(x, tau, val, grid);
  }
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    auto& smp = out.samples[i];
    smp.bound = std::exp(out.fit.intercept + 3.0 * out.fit.stderr_fit + out.fit.slope * x[i] +
                         out.fit.omega * tau[i]);
    smp.pass = smp.value <= smp.bound * (1.0 + 1e-12);
  }
  return out;
}

double davies_required_kappa(double c0, double gamma, double P_inf) {
  return 1.0 + c0 * (gamma * gamma + P_inf * P_inf);
}

DaviesReport davies_bound_check(const CoefficientSet& c, const SolverConfig& cfg,
                                const std::vector<double>& zeta,
                                const std::vector<std::pair<int, int>>& pairs, const DecayFit& fit,
                                int probes, std::uint64_t seed) {
  const auto& g = c.grid;
  require(static_cast<int>(zeta.size()) == g.n, ErrorKind::invalid_argument,
          "gradient of h needs n components");
  require(std::isfinite(fit.c0) && fit.c0 > 0.0 && fit.C > 0.0, ErrorKind::invalid_argument,
          "Davies check needs a finite decay fit");
  DaviesReport rep;
  double g2 = 0.0;
  for (double z : zeta) g2 += z * z;
  rep.gamma = std::sqrt(g2);
  rep.kappa_required = davies_required_kappa(fit.c0, rep.gamma, p_infinity(c));
  const CoefficientSet ch = davies_conjugate_gradient(c, zeta);

  SolverConfig hc = cfg;
  std::optional<GreenSolver> solver;
  try {
    solver.emplace(ch, hc, Direction::forward);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_elliptic) throw;
    hc.kappa = std::max(cfg.kappa, rep.kappa_required);
    try {
      solver.emplace(ch, hc, Direction::forward);
    } catch (const Error& e2) {
      if (e2.kind() != ErrorKind::not_elliptic) throw;
      fail(ErrorKind::not_elliptic, "conjugated certificate fails; required kappa = " +
                                        std::to_string(rep.kappa_required));
    }
  }
  rep.kappa_used = solver->kappa_solve();

  std::map<int, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_source[pairs[i].first].push_back(i);
  rep.ratios.assign(pairs.size(), NAN);
  for (const auto& [s, idx] : by_source) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(s)));
    for (int p = 0; p < probes; ++p) {
      const SpatialField phi = random_spatial_field(g, rng);
      const double pn = norm(phi);
      const Trajectory tr = solver->column(s, phi);
      for (std::size_t i : idx) {
        const int t = pairs[i].second;
        const double tau = positive_offset(g, s, t);
        // Beyond gamma sqrt(t-s) = 4 the wrap dominates; skipped.
        if (rep.gamma * std::sqrt(tau) > 4.0) continue;
        const double v = std::exp(hc.kappa * tau) * norm(get_slice(tr.data, t)) / pn;
        const double b = fit.C * std::exp((fit.omega + fit.c0 * g2) * tau);
        const double r = v / b;
        rep.ratios[i] = std::isnan(rep.ratios[i]) ? r : std::max(rep.ratios[i], r);
      }
    }
  }
  for (double r : rep.ratios)
    if (!std::isnan(r)) rep.max_ratio = std::max(rep.max_ratio, r);
  return rep;
}

double GaussianBoundParams::mu() const {
  using std::numbers::pi;
  const double h = 0.5 * n;
  const double inner = std::pow(2.0, 1.0 + h) * B * C;
  return std::pow(32.0 * pi * c0, h) * std::pow(2.0, h) * std::exp(2.0 / c0) * inner * inner;
}

double GaussianBoundParams::bound(double tau, double r) const {
  using std::numbers::pi;
  require(tau > 0.0, ErrorKind::invalid_argument, "kernel bound needs t > s");
  const double k = std::floor(tau / (rho * rho));
  return std::pow(mu(), k + 1.0) / std::pow(16.0 * pi * c0 * tau, 0.5 * n) *
         std::exp(-r * r / (16.0 * c0 * tau) + omega * tau);
}

GaussianReport gaussian_bound_check(const std::vector<PropagatorMatrix>& stack,
                                    const GaussianBoundParams& params, bool keep_rows) {
  require(params.B > 0.0 && params.C > 0.0 && params.c0 > 0.0 && params.rho > 0.0,
          ErrorKind::invalid_argument, "Gaussian bound parameters must be positive");
  GaussianReport rep;
  for (const auto& P : stack) {
    const auto& g = P.grid;
    require(g.n == params.n, ErrorKind::invalid_argument, "dimension mismatch");
    require(P.dir == Direction::forward, ErrorKind::invalid_argument,
            "Gaussian bound needs forward kernels");
    const int off = signed_offset(P.t, P.s, g.Nt);
    require(off > 0, ErrorKind::invalid_argument, "kernel with t - s <= 0 rejected");
    const double tau = off * g.dt;
    const double scale =
        (P.flag == PropagatorFlag::green ? std::exp(P.kappa * tau) : 1.0) / g.spatial_cell();
    for (Eigen::Index y = 0; y < P.M.cols(); ++y)
      for (Eigen::Index x = 0; x < P.M.rows(); ++x) {
        const double k = std::abs(P.M(x, y)) * scale;
        const double r = torus_distance(g, static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        const double b = params.bound(tau, r);
        const double ratio = k > 0.0 ? b / k : INFINITY;
        ++rep.entries;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        if (ratio < 1.0) ++rep.violations;
        if (keep_rows)
          rep.rows.push_back({P.t_time(), P.s_time(), static_cast<std::size_t>(x),
                              static_cast<std::size_t>(y), k, b, ratio});
      }
  }
  return rep;
}

double measure_local_bound(const Field& u, double r, const std::vector<LocalCenter>& centers,
                           int source) {
  const auto& g = u.grid;
  require(r >= 2.0 * g.dx * (1.0 - 1e-12) && r * r >= 2.0 * g.dt * (1.0 - 1e-12),
          ErrorKind::invalid_argument, "radius below grid resolution (need r >= 2dx, r^2 >= 2dt)");
  require(!centers.empty(), ErrorKind::invalid_argument, "no centers");
  const std::size_t S = g.spatial_size();
  const int span = static_cast<int>(std::ceil(4.0 * r * r / g.dt - 1e-9));
  require(span < g.Nt, ErrorKind::invalid_argument, "cylinder longer than the time window");
  const double cell = g.cell_volume();
  double best = -1.0;
  for (const auto& c : centers) {
    require(0 <= c.t && c.t < g.Nt && c.x < S, ErrorKind::invalid_argument, "center off grid");
    const int first = c.t - span + 1;
    if (source >= 0) {
      const int a = forward_offset(first, source, g.Nt);
      const int b = forward_offset(c.t, source, g.Nt);
      if (a < 1 || b >= g.Nt / 2 || a > b) continue;
    }
    double sup = 0.0, mass = 0.0;
    for (std::size_t y = 0; y < S; ++y) {
      const double d = torus_distance(g, c.x, y);
      if (d <= r * (1.0 + 1e-12)) sup = std::max(sup, std::norm(u(c.t, y)));
      if (d <= 2.0 * r * (1.0 + 1e-12))
        for (int j = first; j <= c.t; ++j) mass += std::norm(u((j + g.Nt) % g.Nt, y)) * cell;
    }
    if (mass <= 0.0) continue;
    best = std::max(best, std::sqrt(sup * std::pow(r, g.n + 2) / mass));
  }
  require(best >= 0.0, ErrorKind::geometry, "every cylinder met the source or the wrap guard");
  return best;
}

namespace {

// Applies (-Delta)^{-1/2} V (-Delta)^{-1/2} on mean-zero data.
class HardyOperator {
 public:
  explicit HardyOperator(const SpatialField& V) : V_(V), g_(V.grid) {
    inv_.resize(V.size());
    for (std::size_t x = 0; x < V.size(); ++x) {
      const double k2 = g_.xi_squared(x);
      inv_[x] = k2 > 0.0 ? 1.0 / std::sqrt(k2) : 0.0;
    }
  }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    SpatialField f(g_);
    for (std::size_t x = 0; x < f.size(); ++x) f[x] = v(static_cast<Eigen::Index>(x));
    half(f);
    for (std::size_t x = 0; x < f.size(); ++x) f[x] *= V_[x].real();
    half(f);
    Eigen::VectorXd out(v.size());
    for (std::size_t x = 0; x < f.size(); ++x) out(static_cast<Eigen::Index>(x)) = f[x].real();
    return out;
  }

 private:
  void half(SpatialField& f) const {
    spatial_forward(f);
    for (std::size_t x = 0; x < f.size(); ++x) f[x] *= inv_[x];
    spatial_inverse(f);
  }
  const SpatialField& V_;
  SpaceTimeGrid g_;
  std::vector<double> inv_;
};

}  // namespace

std::pair<double, double> hardy_quotient_range(const SpatialField& V, int steps) {
  for (const auto& z : V.data)
    require(z.imag() == 0.0, ErrorKind::invalid_argument, "potential must be real");
  const auto S = static_cast<Eigen::Index>(V.size());
  steps = std::max(2, std::min<int>(steps, static_cast<int>(S) - 1));
  HardyOperator K(V);
  Rng rng(12345);
  Eigen::VectorXd q(S);
  for (Eigen::Index i = 0; i < S; ++i) q(i) = rng.normal();
  q.array() -= q.mean();
  q.normalize();
  std::vector<Eigen::VectorXd> Q{q};
  std::vector<double> alpha, beta;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd w = K.apply(Q.back());
    alpha.push_back(Q.back().dot(w));
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : Q) w -= v.dot(w) * v;
    const double b = w.norm();
    if (b < 1e-12 * std::abs(alpha.back()) || k + 1 == steps) break;
    beta.push_back(b);
    Q.push_back(w / b);
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i + 1 < m; ++i) e(i) = beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(m - 1)};
}

CoulombReport coulomb_scenario(const SpaceTimeGrid& g, cplx c, double M, int probes,
                               std::uint64_t seed) {
  require(g.n == 3, ErrorKind::invalid_argument, "the Coulomb scenario is defined for n = 3");
  CoulombReport rep;
  rep.c = c;
  rep.M = M > 0.0 ? M : coulomb_default_cap(g);
  const SpatialField V = coulomb_potential(g, rep.M);
  const auto [lo, hi] = hardy_quotient_range(V, 120);
  rep.mu_min = lo;
  rep.mu_max = hi;
  rep.ratio = 1.0 + c.real() * (c.real() < 0.0 ? hi : lo);

  rep.probe_ratio = INFINITY;
  for (int p = 0; p < probes; ++p) {
    const SpatialField u = band_limited_spatial(g, sub_seed(seed, p), std::max(1, g.Nx / 4), true);
    const auto grad = gradient(u);
    double gg = 0.0;
    for (const auto& gc : grad) gg += std::pow(norm(gc), 2);
    SpatialField Vu = u;
    for (std::size_t x = 0; x < Vu.size(); ++x) Vu[x] *= c * V[x];
    const double q = gg + inner(Vu, u).real();
    rep.probe_ratio = std::min(rep.probe_ratio, q / gg);
  }
  rep.pass = rep.ratio > 0.0;
  return rep;
}

}  // namespace greenop
