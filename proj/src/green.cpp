#include "greenop/green.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/field_io.hpp"
#include "greenop/rng.hpp"

namespace greenop {

double wrap_kappa(const SpaceTimeGrid& g, double tol) {
  return 1.2 * std::log(1.0 / std::min(tol, 0.5)) / g.Lt;
}

namespace {

double inner_tol(double tol) { return std::max(0.01 * tol, 1e-13); }

}  // namespace

GreenSolver::GreenSolver(const CoefficientSet& c, const SolverConfig& cfg, Direction dir)
    : c_(c), dir_(dir) {
  const auto& g = c_.grid;
  validate(c_);
  require(cfg.tol > 0.0 && cfg.kappa >= 0.0, ErrorKind::invalid_argument,
          "invalid solver configuration");
  kappa_ = cfg.kappa;
  kappa_s_ = std::max(cfg.kappa, wrap_kappa(g, cfg.tol));
  inner_ = cfg;
  inner_.kappa = kappa_s_;
  inner_.scheme = TimeScheme::causal_euler;
  inner_.tol = inner_tol(cfg.tol);
  inner_.max_iter = std::max(cfg.max_iter, 200);
  // The homogeneous weights drop the joint zero mode, which kappa > 0 makes solvable.
  inner_.mode = NormMode::inhomogeneous;
  if (cfg.check_certificate && !cfg.force) {
    const auto bounds = garding_constants(c_);
    require(bounds.elliptic(), ErrorKind::not_elliptic,
            "coefficients are not elliptic (lambda <= 0)");
    CertificateConfig cc;
    cc.kappa = kappa_s_;
    cc.delta = cfg.delta;
    cc.probes = cfg.certificate_probes;
    cc.seed = cfg.seed;
    cc.mode = cfg.mode;
    cc.scheme = TimeScheme::causal_euler;
    certificate_ = coercivity_certificate(c_, cc);
    require(certificate_->pass, ErrorKind::not_elliptic,
            "coercivity certificate failed for the requested (kappa, delta)");
  }
  inner_.check_certificate = false;
  build_reference();
}

Field GreenSolver::raw(int s, const SpatialField& psi, SolveReport* report) const {
  const auto& g = c_.grid;
  check_same_grid(g, psi.grid);
  check_finite(psi);
  require(0 <= s && s < g.Nt, ErrorKind::invalid_argument, "source slice out of range");
  const std::size_t S = g.spatial_size();
  SpatialField ph = psi;
  spatial_forward(ph);
  Field w(g);
  for (int j = 0; j < g.Nt; ++j) {
    const int m = dir_ == Direction::forward ? forward_offset(j, s, g.Nt)
                                             : forward_offset(s, j, g.Nt);
    const double delta = m * g.dt;
    for (std::size_t x = 0; x < S; ++x) w(j, x) = ph[x] * std::exp(-a_[x] * delta) * period_[x];
  }
  // -(L - L0) w in the (t, xi) representation.
  Field rhs = apply_L_spectral(c_, w, dir_ == Direction::backward);
  for (int j = 0; j < g.Nt; ++j)
    for (std::size_t x = 0; x < S; ++x) rhs(j, x) = symbol0_[x] * w(j, x) - rhs(j, x);
  spatial_inverse(rhs);
  spatial_inverse(w);
  auto v = solve_variational(c_, rhs, inner_, dir_);
  if (report) {
    *report = v.report;
    report->certificate = certificate_;
  }
  require(v.report.converged || v.report.residual <= 10.0 * inner_.tol, ErrorKind::not_converged,
          "correction solve did not converge");
  w += v.u;
  return w;
}

Trajectory GreenSolver::column(int s, const SpatialField& psi) const {
  const auto& g = c_.grid;
  Trajectory tr;
  tr.s = s;
  tr.kappa = kappa_;
  tr.kappa_solve = kappa_s_;
  tr.dir = dir_;
  tr.psi_norm = norm(psi);
  tr.data = raw(s, psi, &tr.report);
  reweight(tr.data, s);
  tr.plus = get_slice(tr.data, (s + 1) % g.Nt);
  tr.minus = get_slice(tr.data, (s - 1 + g.Nt) % g.Nt);
  return tr;
}

// G_kappa = e^{(kappa_s - kappa)(t - s)} G_{kappa_s} forward, with (s - t) backward.
void GreenSolver::reweight(Field& u, int s) const {
  const auto& g = c_.grid;
  const double m = kappa_s_ - kappa_;
  if (m == 0.0) return;
  const std::size_t S = g.spatial_size();
  for (int j = 0; j < g.Nt; ++j) {
    int off = signed_offset(j, s, g.Nt);
    if (dir_ == Direction::backward) off = -off;
    const double f = std::exp(m * off * g.dt);
    for (std::size_t x = 0; x < S; ++x) u(j, x) *= f;
  }
}

void GreenSolver::build_reference() {
  const auto& g = c_.grid;
  const int n = g.n;
  const std::size_t S = g.spatial_size();
  std::vector<cplx> Abar(n * n);
  for (int i = 0; i < n * n; ++i) Abar[i] = c_.A[i].mean(g);
  std::vector<cplx> dbar(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!c_.bvec.empty()) dbar[i] += c_.bvec[i].mean(g);
    if (!c_.avec.empty()) dbar[i] -= c_.avec[i].mean(g);
  }
  const cplx cbar = c_.a0.mean(g);
  std::vector<cplx> second(S), lower(S);
  bool positive = true;
  for (std::size_t x = 0; x < S; ++x) {
    cplx q = 0.0, l = cbar;
    for (int i = 0; i < n; ++i) {
      const double xi = g.xi_component(x, i);
      l += cplx(0.0, 1.0) * dbar[i] * xi;
      for (int j = 0; j < n; ++j) q += Abar[i * n + j] * xi * g.xi_component(x, j);
    }
    second[x] = q;
    lower[x] = l;
    if ((kappa_s_ + q + l).real() <= 0.0) positive = false;
  }
  a_.resize(S);
  symbol0_.resize(S);
  period_.resize(S);
  for (std::size_t x = 0; x < S; ++x) {
    cplx sym = second[x] + (positive ? lower[x] : cplx(0.0));
    if (dir_ == Direction::backward) sym = std::conj(sym);
    symbol0_[x] = sym;
    a_[x] = kappa_s_ + sym;
    period_[x] = 1.0 / (1.0 - std::exp(-a_[x] * g.Lt));
  }
}

namespace {

SpatialField basis_vector(const SpaceTimeGrid& g, std::size_t x) {
  SpatialField e(g);
  e[x] = 1.0;
  return e;
}

}  // namespace

Trajectory green_column(const CoefficientSet& c, const SolverConfig& cfg, int s,
                        const SpatialField& psi, Direction dir) {
  return GreenSolver(c, cfg, dir).column(s, psi);
}

SpatialField PropagatorMatrix::apply(const SpatialField& psi) const {
  check_same_grid(grid, psi.grid);
  SpatialField out(grid);
  Eigen::Map<const Eigen::VectorXcd> in(psi.data.data(), static_cast<Eigen::Index>(psi.size()));
  Eigen::Map<Eigen::VectorXcd>(out.data.data(), static_cast<Eigen::Index>(out.size())) = M * in;
  return out;
}

std::vector<PropagatorMatrix> propagator_set(const CoefficientSet& c, const SolverConfig& cfg,
                                             int s, const std::vector<int>& targets,
                                             PropagatorFlag flag, Direction dir) {
  const auto& g = c.grid;
  for (int t : targets) {
    require(0 <= t && t < g.Nt, ErrorKind::invalid_argument, "target slice out of range");
    require(t != s, ErrorKind::invalid_argument,
            "t = s is not a propagator; use the one-sided limits of green_column");
  }
  GreenSolver solver(c, cfg, dir);
  const auto S = static_cast<Eigen::Index>(g.spatial_size());
  std::vector<PropagatorMatrix> out(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    auto& P = out[k];
    P.grid = g;
    P.s = s;
    P.t = targets[k];
    P.kappa = cfg.kappa;
    P.flag = flag;
    P.dir = dir;
    P.M.resize(S, S);
  }
  for (Eigen::Index y = 0; y < S; ++y) {
    const Trajectory tr = solver.column(s, basis_vector(g, static_cast<std::size_t>(y)));
    for (auto& P : out)
      for (Eigen::Index x = 0; x < S; ++x) P.M(x, y) = tr.data(P.t, static_cast<std::size_t>(x));
  }
  if (flag == PropagatorFlag::fundamental)
    for (auto& P : out) {
      // Gamma(t, s) = e^{kappa(t - s)} G_kappa(t, s); G~ uses (s - t).
      int off = signed_offset(P.t, s, g.Nt);
      if (dir == Direction::backward) off = -off;
      P.M *= std::exp(cfg.kappa * off * g.dt);
    }
  return out;
}

PropagatorMatrix propagator(const CoefficientSet& c, const SolverConfig& cfg, int s, int t,
                            PropagatorFlag flag, Direction dir) {
  return propagator_set(c, cfg, s, {t}, flag, dir).front();
}

double operator_norm(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

namespace {

void check_pair(const PropagatorMatrix& a, const PropagatorMatrix& b) {
  check_same_grid(a.grid, b.grid);
  require(a.kappa == b.kappa, ErrorKind::invalid_argument, "propagators use different kappa");
  require(a.flag == b.flag, ErrorKind::invalid_argument, "propagators use different flags");
}

double relative(const Eigen::MatrixXcd& diff, const Eigen::MatrixXcd& ref) {
  const double r = operator_norm(ref);
  const double d = operator_norm(diff);
  return r > 0.0 ? d / r : d;
}

bool strictly_between(int s, int r, int t) { return (s < r && r < t) || (t < r && r < s); }

}  // namespace

double chapman_kolmogorov_defect(const PropagatorMatrix& Gts, const PropagatorMatrix& Gtr,
                                 const PropagatorMatrix& Grs) {
  check_pair(Gts, Gtr);
  check_pair(Gts, Grs);
  require(Gtr.t == Gts.t && Grs.s == Gts.s && Gtr.s == Grs.t, ErrorKind::invalid_argument,
          "propagators do not chain as G(t,r) G(r,s)");
  require(strictly_between(Gts.s, Grs.t, Gts.t), ErrorKind::invalid_argument,
          "r must lie strictly between s and t");
  return relative(Gts.M - Gtr.M * Grs.M, Gts.M);
}

double adjoint_defect(const PropagatorMatrix& Gts, const PropagatorMatrix& Gst_adj) {
  check_pair(Gts, Gst_adj);
  require(Gts.dir == Direction::forward && Gst_adj.dir == Direction::backward,
          ErrorKind::invalid_argument, "need a forward and a backward propagator");
  require(Gts.s == Gst_adj.t && Gts.t == Gst_adj.s, ErrorKind::invalid_argument,
          "adjoint pair must swap source and target");
  return relative(Gts.M - Gst_adj.M.adjoint(), Gts.M);
}

double causality_defect(const Trajectory& traj) {
  const auto& g = traj.data.grid;
  if (traj.psi_norm == 0.0) return 0.0;
  const int first = static_cast<int>(std::ceil(0.9 * g.Nt));
  double m = 0.0;
  for (int off = first; off <= g.Nt - 2; ++off) {
    const int j = (traj.s + off) % g.Nt;
    m = std::max(m, norm(get_slice(traj.data, j)));
  }
  return m / traj.psi_norm;
}

double causality_threshold(const SpaceTimeGrid& g, double kappa, double tol) {
  return std::max(std::exp(-kappa * 0.9 * g.Lt), 10.0 * tol);
}

std::pair<SpatialField, SpatialField> pi_limits(const Trajectory& traj) {
  return {traj.plus, traj.minus};
}

double jump_defect(const Trajectory& traj, const SpatialField& psi) {
  const double sign = traj.dir == Direction::forward ? 1.0 : -1.0;
  SpatialField d = traj.plus;
  for (std::size_t x = 0; x < d.size(); ++x) d[x] -= traj.minus[x] + sign * psi[x];
  const double p = norm(psi);
  return p > 0.0 ? norm(d) / p : norm(d);
}

namespace {

Eigen::MatrixXcd probe_matrix(const SpaceTimeGrid& g, int k, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd W(static_cast<Eigen::Index>(g.spatial_size()), k);
  for (Eigen::Index j = 0; j < W.cols(); ++j)
    for (Eigen::Index i = 0; i < W.rows(); ++i) W(i, j) = rng.complex_normal();
  return W;
}

SpatialField column_of(const SpaceTimeGrid& g, const Eigen::MatrixXcd& W, Eigen::Index j) {
  SpatialField f(g);
  for (Eigen::Index i = 0; i < W.rows(); ++i) f[static_cast<std::size_t>(i)] = W(i, j);
  return f;
}

void store(Eigen::MatrixXcd& Y, Eigen::Index j, const Field& u, int slice) {
  for (Eigen::Index i = 0; i < Y.rows(); ++i) Y(i, j) = u(slice, static_cast<std::size_t>(i));
}

}  // namespace

double sketch_chapman_kolmogorov_defect(const CoefficientSet& c, const SolverConfig& cfg, int s,
                                        int r, int t, int k, std::uint64_t seed) {
  require(k >= 1, ErrorKind::invalid_argument, "sketch needs at least one probe");
  require(strictly_between(s, r, t), ErrorKind::invalid_argument,
          "r must lie strictly between s and t");
  const auto& g = c.grid;
  const auto dir = t > s ? Direction::forward : Direction::backward;
  GreenSolver solver(c, cfg, dir);
  const auto W = probe_matrix(g, k, seed);
  const auto S = static_cast<Eigen::Index>(g.spatial_size());
  Eigen::MatrixXcd direct(S, k), chained(S, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto tr = solver.column(s, column_of(g, W, j));
    store(direct, j, tr.data, t);
    const auto tr2 = solver.column(r, get_slice(tr.data, r));
    store(chained, j, tr2.data, t);
  }
  const double d = (direct - chained).norm();
  const double ref = direct.norm();
  return ref > 0.0 ? d / ref : d;
}

double sketch_adjoint_defect(const CoefficientSet& c, const SolverConfig& cfg, int s, int t, int k,
                             std::uint64_t seed) {
  require(k >= 1, ErrorKind::invalid_argument, "sketch needs at least one probe");
  require(s != t, ErrorKind::invalid_argument, "need s != t");
  const auto& g = c.grid;
  GreenSolver fwd(c, cfg, Direction::forward);
  GreenSolver bwd(c, cfg, Direction::backward);
  const auto W = probe_matrix(g, k, seed);
  const auto V = probe_matrix(g, k, sub_seed(seed, 1));
  const auto S = static_cast<Eigen::Index>(g.spatial_size());
  Eigen::MatrixXcd GW(S, k), GtV(S, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    store(GW, j, fwd.column(s, column_of(g, W, j)).data, t);
    store(GtV, j, bwd.column(t, column_of(g, V, j)).data, s);
  }
  // <G W_i, V_j> against <W_i, G~ V_j>.
  const Eigen::MatrixXcd lhs = V.adjoint() * GW;
  const Eigen::MatrixXcd rhs = GtV.adjoint() * W;
  const double ref = lhs.norm();
  const double d = (lhs - rhs).norm();
  return ref > 0.0 ? d / ref : d;
}

CoefficientSet canonical_extension(const CoefficientSet& c, double T) {
  validate(c);
  const auto& g = c.grid;
  require(T > 0.0 && T < g.Lt, ErrorKind::invalid_argument, "horizon must lie in (0, Lt)");
  const int last = static_cast<int>(std::floor(T / g.dt + 1e-9));
  auto extend = [&](const CoeffField& f, cplx outside) {
    Field u = f.to_field(g);
    for (int j = last + 1; j < g.Nt; ++j)
      for (std::size_t x = 0; x < g.spatial_size(); ++x) u(j, x) = outside;
    return CoeffField::full(u);
  };
  CoefficientSet e = c;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) e.A[i * g.n + j] = extend(c.Aij(i, j), i == j ? 1.0 : 0.0);
  for (auto& a : e.avec) a = extend(a, 0.0);
  for (auto& b : e.bvec) b = extend(b, 0.0);
  e.a0 = extend(c.a0, 0.0);
  return e;
}

CauchyResult solve_cauchy(const CoefficientSet& c, const SpatialField& psi,
                          const std::vector<Field>& F, const Field& g, const Field& h, double T,
                          const SolverConfig& cfg) {
  const auto& G = c.grid;
  require(T > 0.0 && T <= 0.5 * G.Lt, ErrorKind::invalid_argument,
          "horizon must lie in (0, Lt/2] so the periodic window damps the wrap");
  check_same_grid(G, psi.grid);
  check_same_grid(G, g.grid);
  check_same_grid(G, h.grid);
  require(static_cast<int>(F.size()) == G.n || F.empty(), ErrorKind::invalid_argument,
          "flux needs n components");
  const CoefficientSet ext = canonical_extension(c, T);
  const int last = static_cast<int>(std::floor(T / G.dt + 1e-9));
  GreenSolver solver(ext, cfg, Direction::forward);
  const double ks = solver.kappa_solve();
  const double tol = cfg.tol;

  CauchyResult out;
  out.last_slice = last;
  out.kappa = ks;

  // Causality of the configuration, measured on psi or on a probe.
  SpatialField probe = psi;
  const bool use_psi = norm(psi) > 0.0;
  if (!use_psi) probe = band_limited_spatial(G, sub_seed(cfg.seed, 7), std::max(1, G.Nx / 4));
  Trajectory tr;
  tr.s = 0;
  tr.dir = Direction::forward;
  tr.psi_norm = norm(probe);
  tr.data = solver.raw(0, probe, &out.report);
  tr.plus = get_slice(tr.data, 1);
  tr.minus = get_slice(tr.data, G.Nt - 1);
  out.causality = causality_defect(tr);
  require(out.causality <= causality_threshold(G, ks, tol), ErrorKind::not_causal,
          "configuration is not causal on this window; refusing the initial-value problem");

  Field u = use_psi ? tr.data : Field(G);
  Field f = g + h;
  if (!F.empty()) f -= divergence(F);
  bool any = false;
  for (int j = 0; j < G.Nt; ++j) {
    const double w = j <= last ? std::exp(-ks * G.time_at(j)) : 0.0;
    for (std::size_t x = 0; x < G.spatial_size(); ++x) {
      f(j, x) *= w;
      any = any || f(j, x) != cplx(0.0);
    }
  }
  if (any) {
    SolverConfig inner = cfg;
    inner.kappa = ks;
    inner.scheme = TimeScheme::causal_euler;
    inner.tol = inner_tol(tol);
    inner.max_iter = std::max(cfg.max_iter, 200);
    inner.mode = NormMode::inhomogeneous;
    inner.check_certificate = false;
    auto v = solve_variational(ext, f, inner, Direction::forward);
    require(v.report.converged || v.report.residual <= 10.0 * inner.tol, ErrorKind::not_converged,
            "source solve did not converge");
    u += v.u;
  }
  for (int j = 0; j < G.Nt; ++j) {
    const double w = j <= last ? std::exp(ks * G.time_at(j)) : 0.0;
    for (std::size_t x = 0; x < G.spatial_size(); ++x) u(j, x) *= w;
  }
  out.u = std::move(u);
  return out;
}

void write_propagator(const std::string& path, const PropagatorMatrix& P) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorKind::io, "cannot open " + path);
  const auto& g = P.grid;
  nlohmann::json h{{"magic", "GOP1"},
                   {"n", g.n},
                   {"Nx", g.Nx},
                   {"Lx", g.Lx},
                   {"Nt", g.Nt},
                   {"Lt", g.Lt},
                   {"s", P.s_time()},
                   {"t", P.t_time()},
                   {"kappa", P.kappa},
                   {"flag", P.flag == PropagatorFlag::green ? "green" : "fundamental"},
                   {"direction", P.dir == Direction::forward ? "forward" : "backward"},
                   {"layout", "row-major"},
                   {"scalar", "complex-f64-le"}};
  os << h.dump() << '\n';
  // Eigen stores column-major; write row by row.
  const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = P.M;
  io_detail::write_pairs(os, R.data(), static_cast<std::size_t>(R.size()));
}

PropagatorMatrix read_propagator(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorKind::io, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::io, "empty file: " + path);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, "bad header in " + path + ": " + e.what());
  }
  require(h.value("magic", "") == "GOP1", ErrorKind::io, "not a GOP1 file: " + path);
  PropagatorMatrix P;
  try {
    P.grid = make_grid(h.at("n"), h.at("Nx"), h.at("Lx"), h.value("Nt", 2), h.value("Lt", 1.0));
    P.s = static_cast<int>(std::lround(h.at("s").get<double>() / P.grid.dt));
    P.t = static_cast<int>(std::lround(h.at("t").get<double>() / P.grid.dt));
    P.kappa = h.at("kappa");
    P.flag = h.at("flag") == "green" ? PropagatorFlag::green : PropagatorFlag::fundamental;
    P.dir = h.value("direction", "forward") == "forward" ? Direction::forward : Direction::backward;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, "incomplete header in " + path + ": " + e.what());
  }
  const auto S = static_cast<Eigen::Index>(P.grid.spatial_size());
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R(S, S);
  io_detail::read_pairs(is, R.data(), static_cast<std::size_t>(R.size()));
  P.M = R;
  return P;
}

}  // namespace greenop
