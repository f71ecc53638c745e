#include "greenop/commands.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "greenop/csv.hpp"
#include "greenop/error.hpp"
#include "greenop/estimates.hpp"
#include "greenop/exponents.hpp"
#include "greenop/field_io.hpp"
#include "greenop/generators.hpp"
#include "greenop/green.hpp"
#include "greenop/norms.hpp"
#include "greenop/operator.hpp"
#include "greenop/rng.hpp"

namespace greenop::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace anchor {
// The statement each check tests.
const std::string jump = "Pi_s^+ - Pi_s^- = Id; for the adjoint problem the jump is -Id";
const std::string chapman = "G(t,s) = G(t,r) G(r,s) for r strictly between s and t";
const std::string adjoint = "G(t,s) and the adjoint Green operator G~(s,t) are adjoint for s != t";
const std::string causal = "the orbit of a Dirac datum at s vanishes before s";
const std::string coercive =
    "Re <H u, (Id + delta H_t) u> >= delta/2 ||u||^2, delta = lambda / (1 + Lambda)";
const std::string fundamental = "Gamma(t,s) = e^{kappa (t-s)} G_kappa(t,s) for t > s";
const std::string offdiag =
    "||Gamma(t,s) psi||_{L2(E)} <= C e^{-d(E,F)^2 / 4 c0 (t-s) + omega (t-s)} ||psi||_{L2(F)}";
const std::string gaussian =
    "|Gamma(t,x,s,y)| <= mu^{k+1} (16 pi c0 (t-s))^{-n/2} e^{-|x-y|^2 / 16 c0 (t-s) + omega (t-s)}";
const std::string local_bound =
    "sup_{B(x,r)} |u(t)| <= B (r^{-(n+2)} int_{Q_2r(t,x)} |u|^2)^{1/2} for both equations";
const std::string hardy = "H is coercive when ess inf Re c > -((n-2)/2)^2";
const std::string gn =
    "||d^alpha u||_{L^r(I; L^{q,2})} <= C ||grad^m u||_{L^2 L^2}^{2/r} ||u||_{L^inf L^2}^{1-2/r}";
const std::string lorentz = "L^{p,p} = L^p, and ||f||_{p,s} does not increase with s";
const std::string residual = "H u = f is solved to the dual-norm tolerance";
const std::string inverse = "||H^{-1} f|| <= (2/delta) ||f||_dual";
}  // namespace anchor

bool Summary::pass() const {
  return error.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Summary::add(const std::string& name, double value, double threshold,
                  const std::string& anchor, bool at_least) {
  const bool ok = std::isfinite(value) && (at_least ? value >= threshold : value <= threshold);
  checks.push_back({name, value, threshold, ok, anchor});
}

json Summary::to_json() const {
  auto num = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  json rows = json::array();
  for (const auto& c : checks)
    rows.push_back({{"name", c.name},
                    {"value", num(c.value)},
                    {"threshold", num(c.threshold)},
                    {"pass", c.pass},
                    {"anchor", c.anchor}});
  json j = {{"command", command}, {"pass", pass()}, {"checks", rows}, {"wall_time", wall_time}};
  if (!error.empty()) j["error"] = error;
  return j;
}

namespace {

int slice_at(const SpaceTimeGrid& g, double t) {
  const long k = std::lround(t / g.dt);
  return static_cast<int>(((k % g.Nt) + g.Nt) % g.Nt);
}

std::size_t center_index(const SpaceTimeGrid& g, int shift = 0) {
  int idx[3];
  for (int c = 0; c < g.n; ++c) idx[c] = g.Nx / 2;
  idx[0] = ((idx[0] + shift) % g.Nx + g.Nx) % g.Nx;
  return g.ravel(idx);
}

// params.psi: {kind: gaussian | spike | band | field, ...}; gaussian is the default.
SpatialField make_psi(const RunManifest& m, const json& spec) {
  const auto& g = m.grid;
  const std::string kind = spec.is_object() ? param(spec, "kind", std::string("gaussian"))
                                            : std::string("gaussian");
  const json p = spec.is_object() ? spec : json::object();
  SpatialField psi(g);
  if (kind == "gaussian") {
    const double sigma = param(p, "sigma", 1.0);
    const auto center = param_list(p, "center", std::vector<double>(g.n, 0.5 * g.Lx));
    if (static_cast<int>(center.size()) != g.n) throw SchemaError("psi.center needs n entries");
    for (std::size_t x = 0; x < psi.size(); ++x) {
      double r2 = 0.0;
      for (int c = 0; c < g.n; ++c) {
        double d = std::abs(g.coord(x, c) - center[c]);
        d = std::min(d, g.Lx - d);
        r2 += d * d;
      }
      psi[x] = std::exp(-r2 / (2.0 * sigma * sigma));
    }
  } else if (kind == "spike") {
    psi[center_index(g)] = 1.0 / g.spatial_cell();
  } else if (kind == "band") {
    psi = band_limited_spatial(g, sub_seed(m.seed, 3), param(p, "kx", 3));
  } else if (kind == "field") {
    psi = read_spatial_field(resolve(m, param(p, "path", std::string())).string(), g);
    check_same_grid(psi.grid, g);
  } else {
    throw SchemaError("unknown psi kind '" + kind + "'");
  }
  return psi;
}

void write_norm_profile(const fs::path& path, const Field& u) {
  CsvWriter csv(path.string(), {"t", "norm"});
  for (int j = 0; j < u.grid.Nt; ++j)
    csv.row({csv_number(u.grid.time_at(j)), csv_number(norm(get_slice(u, j)))});
}

int slices_in(const RunManifest& m, const char* key, double fallback) {
  return slice_at(m.grid, param(m.params, key, fallback));
}

std::vector<int> window_offsets(const SpaceTimeGrid& g, double t0, double t1) {
  std::vector<int> out;
  for (int k = 1; k < g.Nt / 2; ++k)
    if (k * g.dt >= t0 - 1e-12 && k * g.dt <= t1 + 1e-12) out.push_back(k);
  return out;
}

// Identity suite: jump, Chapman-Kolmogorov, adjointness, causality.
void cmd_verify(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const auto c = load_coefficients(m);
  const auto& cfg = m.solver;
  const int s = slices_in(m, "s", 0.0);
  const int r = slices_in(m, "r", g.Lt / 8.0);
  const int t = slices_in(m, "t", g.Lt / 4.0);
  if (!(forward_offset(r, s, g.Nt) > 0 && forward_offset(t, r, g.Nt) > 0 &&
        signed_offset(t, s, g.Nt) > 0))
    throw SchemaError("verify needs s < r < t within half a period");
  const auto psi = make_psi(m, m.params.value("psi", json::object()));
  const double tol = cfg.tol;
  CsvWriter csv((m.out / "identity.csv").string(),
                {"check", "s", "r", "t", "kappa", "defect", "threshold", "pass"});
  auto record = [&](const std::string& name, int a, int b, int d, double kappa, double value,
                    double threshold, const std::string& anchor) {
    sum.add(name, value, threshold, anchor);
    csv.row({name, csv_number(g.time_at(a)), b < 0 ? "" : csv_number(g.time_at(b)),
             csv_number(g.time_at(d)), csv_number(kappa), csv_number(value),
             csv_number(threshold), csv_bool(sum.checks.back().pass)});
  };

  const GreenSolver fwd(c, cfg, Direction::forward);
  if (fwd.certificate())
    sum.add("coercivity_certificate", fwd.certificate()->min_ratio, fwd.certificate()->threshold,
            anchor::coercive, true);
  const auto tr = fwd.column(s, psi);
  record("jump_forward", s, -1, s, tr.kappa, jump_defect(tr, psi), 5.0 * g.dt, anchor::jump);
  record("causality", s, -1, s, tr.kappa, causality_defect(tr),
         causality_threshold(g, tr.kappa_solve, tol), anchor::causal);
  const GreenSolver bwd(c, cfg, Direction::backward);
  const auto bt = bwd.column(t, psi);
  record("jump_backward", t, -1, t, bt.kappa, jump_defect(bt, psi), 5.0 * g.dt, anchor::jump);

  const double limit = 50.0 * (tol + g.dt);
  const int dense_max = param(m.params, "dense_max", 512);
  double ck = 0.0, adj = 0.0;
  if (static_cast<int>(g.spatial_size()) <= dense_max) {
    const auto set = propagator_set(c, cfg, s, {r, t});
    ck = chapman_kolmogorov_defect(set[1], propagator(c, cfg, r, t), set[0]);
    adj = adjoint_defect(set[1], propagator(c, cfg, t, s, PropagatorFlag::green,
                                            Direction::backward));
    // Gamma from two damping values above the wrap threshold.
    auto cfg1 = cfg;
    cfg1.kappa = std::max(cfg.kappa, 1.2 * wrap_kappa(g, tol));
    auto cfg2 = cfg1;
    cfg2.kappa = 2.0 * cfg1.kappa;
    const auto G1 = propagator(c, cfg1, s, t, PropagatorFlag::fundamental);
    const auto G2 = propagator(c, cfg2, s, t, PropagatorFlag::fundamental);
    record("kappa_independence", s, -1, t, cfg2.kappa,
           operator_norm(G1.M - G2.M) / operator_norm(G1.M), 10.0 * tol, anchor::fundamental);
  } else {
    const int k = param(m.params, "probes", 8);
    ck = sketch_chapman_kolmogorov_defect(c, cfg, s, r, t, k, sub_seed(m.seed, 4));
    adj = sketch_adjoint_defect(c, cfg, s, t, k, sub_seed(m.seed, 5));
  }
  record("chapman_kolmogorov", s, r, t, cfg.kappa, ck, limit, anchor::chapman);
  record("adjoint", s, -1, t, cfg.kappa, adj, limit, anchor::adjoint);
}

void cmd_green(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const auto c = load_coefficients(m);
  const std::string dir_name = param(m.params, "direction", std::string("forward"));
  if (dir_name != "forward" && dir_name != "backward")
    throw SchemaError("direction must be forward or backward");
  const Direction dir = dir_name == "forward" ? Direction::forward : Direction::backward;
  const std::string flag_name = param(m.params, "flag", std::string("green"));
  if (flag_name != "green" && flag_name != "fundamental")
    throw SchemaError("flag must be green or fundamental");
  const auto flag = flag_name == "green" ? PropagatorFlag::green : PropagatorFlag::fundamental;
  const int s = slices_in(m, "s", 0.0);
  const auto psi = make_psi(m, m.params.value("psi", json::object()));

  const auto tr = green_column(c, m.solver, s, psi, dir);
  write_field((m.out / "green.gof").string(), tr.data);
  write_norm_profile(m.out / "green.csv", tr.data);
  sum.add("correction_residual", tr.report.residual, 10.0 * m.solver.tol, anchor::residual);
  sum.add("jump", jump_defect(tr, psi), 5.0 * g.dt, anchor::jump);
  if (dir == Direction::forward)
    sum.add("causality", causality_defect(tr), causality_threshold(g, tr.kappa_solve, m.solver.tol),
            anchor::causal);

  const auto targets = param_list(m.params, "targets", {});
  if (!targets.empty()) {
    std::vector<int> ts;
    for (double t : targets) ts.push_back(slice_at(g, t));
    const auto set = propagator_set(c, m.solver, s, ts, flag, dir);
    for (const auto& P : set)
      write_propagator((m.out / fmt::format("propagator_{}_{}.gop", P.s, P.t)).string(), P);
  }
}

void cmd_cauchy(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const auto c = load_coefficients(m);
  const auto psi = make_psi(m, m.params.value("psi", json::object()));
  const double T = param(m.params, "T", g.Lt / 4.0);
  if (!(T > 0.0 && T <= 0.5 * g.Lt)) throw SchemaError("cauchy needs 0 < T <= Lt/2");
  std::vector<Field> F(g.n, Field(g));
  const auto res = solve_cauchy(c, psi, F, Field(g), Field(g), T, m.solver);
  write_field((m.out / "cauchy.gof").string(), res.u);
  write_norm_profile(m.out / "cauchy.csv", res.u);
  sum.add("causality", res.causality, causality_threshold(g, res.kappa, m.solver.tol),
          anchor::causal);
  sum.add("residual", res.report.residual, 10.0 * m.solver.tol, anchor::residual);
}

RegionMask parse_region(const SpaceTimeGrid& g, const json& p, const char* key) {
  if (!p.contains(key) || !p.at(key).is_object())
    throw SchemaError(std::string("offdiag needs region '") + key + "'");
  const auto& r = p.at(key);
  if (r.contains("radius"))
    return RegionMask::ball(g, param_list(r, "center", {}), param(r, "radius", 0.0));
  const auto lo = param_list(r, "lo", {}), hi = param_list(r, "hi", {});
  if (static_cast<int>(lo.size()) != g.n || static_cast<int>(hi.size()) != g.n)
    throw SchemaError(std::string("region '") + key + "' needs lo and hi with n entries");
  return RegionMask::box(g, lo, hi);
}

void cmd_offdiag(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const auto c = load_coefficients(m);
  const auto E = parse_region(g, m.params, "E");
  const auto F = parse_region(g, m.params, "F");
  const int s = slices_in(m, "s", 0.0);
  const auto win = param_list(m.params, "window", {0.75, 3.5});
  if (win.size() != 2) throw SchemaError("window must be [t0, t1]");
  std::vector<std::pair<int, int>> pairs;
  for (int k : window_offsets(g, win[0], win[1])) pairs.push_back({s, (s + k) % g.Nt});
  if (pairs.size() < 3) throw SchemaError("window holds fewer than three slices");
  OffdiagOptions opt;
  opt.probes = param(m.params, "probes", opt.probes);
  opt.seed = sub_seed(m.seed, 6);
  const auto prof = offdiagonal_profile(c, m.solver, E, F, pairs, opt);

  CsvWriter csv((m.out / "offdiag.csv").string(), {"s", "t", "dEF", "value", "bound", "pass"});
  int failures = 0;
  for (const auto& d : prof.samples) {
    csv.row({csv_number(g.time_at(d.s)), csv_number(g.time_at(d.t)), csv_number(d.dEF),
             csv_number(d.value), csv_number(d.bound), csv_bool(d.pass)});
    failures += !d.pass;
  }
  sum.add("envelope_failures", failures, 0.0, anchor::offdiag);
  if (prof.fit.fitted) {
    sum.add("slope", prof.fit.slope, 0.0, anchor::offdiag);
    sum.add("r2", prof.fit.r2, param(m.params, "r2_min", 0.95), anchor::offdiag, true);
    const auto range = param_list(m.params, "c0_range", {});
    if (range.size() == 2) {
      sum.add("c0_min", prof.fit.c0, range[0], anchor::offdiag, true);
      sum.add("c0_max", prof.fit.c0, range[1], anchor::offdiag);
    }
  }
}

void cmd_gaussian(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const auto c = load_coefficients(m);
  const int s = slices_in(m, "s", 0.0);
  const auto win = param_list(m.params, "window", {0.1, 1.0});
  if (win.size() != 2) throw SchemaError("window must be [t0, t1]");
  std::vector<int> targets;
  for (int k : window_offsets(g, win[0], win[1])) targets.push_back((s + k) % g.Nt);
  if (targets.empty()) throw SchemaError("window holds no slices");

  // B from a one-cell source, measured on cylinders away from the source slice.
  SpatialField spike(g);
  spike[center_index(g)] = 1.0 / g.spatial_cell();
  const double r = param(m.params, "radius", std::max({2.0 * g.dx, std::sqrt(2.0 * g.dt), 0.5}));
  const int span = static_cast<int>(std::ceil(4.0 * r * r / g.dt));
  std::vector<LocalCenter> centers;
  const int shift = std::max(1, g.Nx / 8);
  for (int j = span + 1; j < g.Nt / 2; j += std::max(1, span / 2))
    for (int dxs : {-shift, 0, shift}) centers.push_back({(s + j) % g.Nt, center_index(g, dxs)});
  GaussianBoundParams p;
  p.n = g.n;
  p.C = param(m.params, "C", p.C);
  p.c0 = param(m.params, "c0", p.c0);
  p.omega = param(m.params, "omega", p.omega);
  p.rho = param(m.params, "rho", p.rho);
  const auto fwd = green_column(c, m.solver, s, spike, Direction::forward);
  // The adjoint orbit runs backward from s; reversing time about s lets it use
  // the same forward cylinders.
  const auto bwd = green_column(c, m.solver, s, spike, Direction::backward);
  Field rev(g);
  for (int j = 0; j < g.Nt; ++j) set_slice(rev, j, get_slice(bwd.data, (2 * s - j + 2 * g.Nt) % g.Nt));
  p.B = std::max(measure_local_bound(fwd.data, r, centers, s),
                 measure_local_bound(rev, r, centers, s));
  p.B = param(m.params, "B", p.B);
  sum.add("local_bound_B", p.B, INFINITY, anchor::local_bound);

  const auto stack = propagator_set(c, m.solver, s, targets, PropagatorFlag::fundamental);
  const auto rep = gaussian_bound_check(stack, p, true);
  CsvWriter csv((m.out / "gaussian.csv").string(),
                {"t", "s", "x", "y", "abs_kernel", "bound", "ratio"});
  for (const auto& row : rep.rows)
    csv.row({csv_number(row.t), csv_number(row.s), csv_number(static_cast<long long>(row.x)),
             csv_number(static_cast<long long>(row.y)), csv_number(row.abs_kernel),
             csv_number(row.bound), csv_number(row.ratio)});
  sum.add("violations", static_cast<double>(rep.violations), 0.0, anchor::gaussian);
  sum.add("min_ratio", rep.min_ratio, 1.0, anchor::gaussian, true);
}

void cmd_coulomb(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  if (g.n != 3) throw SchemaError("coulomb needs n = 3");
  std::vector<double> values = param_list(m.params, "re_c", {});
  if (values.empty()) {
    const double a = param(m.params, "from", -1.0), b = param(m.params, "to", 0.0);
    const int k = param(m.params, "points", 10);
    if (k < 2) throw SchemaError("points must be at least 2");
    for (int i = 0; i < k; ++i) values.push_back(a + (b - a) * i / (k - 1));
  }
  std::sort(values.begin(), values.end());
  const double im = param(m.params, "im_c", 0.0);
  const double M = param(m.params, "M", 0.0);
  const int probes = param(m.params, "probes", 8);
  CsvWriter csv((m.out / "coulomb.csv").string(), {"re_c", "ratio", "pass"});
  std::vector<double> ratios;
  for (double rc : values) {
    const auto rep = coulomb_scenario(g, cplx(rc, im), M, probes, sub_seed(m.seed, 7));
    ratios.push_back(rep.ratio);
    csv.row({csv_number(rc), csv_number(rep.ratio), csv_bool(rep.pass)});
  }
  int breaks = 0;
  for (std::size_t i = 1; i < ratios.size(); ++i) breaks += ratios[i] < ratios[i - 1];
  sum.add("monotonicity_violations", breaks, 0.0, anchor::hardy);
  // Linear interpolation of the sign change.
  double crossing = NAN;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i - 1] <= 0.0 && ratios[i] > 0.0) {
      const double w = ratios[i - 1] / (ratios[i - 1] - ratios[i]);
      crossing = values[i - 1] + w * (values[i] - values[i - 1]);
    }
  const auto bracket = param_list(m.params, "bracket", {-0.30, -0.20});
  if (bracket.size() != 2) throw SchemaError("bracket must be [lo, hi]");
  sum.add("crossing_above", crossing, bracket[0], anchor::hardy, true);
  sum.add("crossing_below", crossing, bracket[1], anchor::hardy);
}

struct GnCase {
  int n, m, a;
  Exponent r, q;
};

void cmd_gn(const RunManifest& m, Summary& sum) {
  std::vector<GnCase> cases;
  if (m.params.contains("cases")) {
    for (const auto& k : m.params.at("cases")) {
      if (!k.is_object()) throw SchemaError("gn cases must be objects");
      cases.push_back({param(k, "n", 1), param(k, "m", 1), param(k, "alpha", 0),
                       Exponent::parse(param(k, "r", std::string("8"))),
                       Exponent::parse(param(k, "q", std::string("4")))});
    }
  } else {
    cases = {{1, 1, 0, 8, 4}, {2, 1, 0, 4, 4}, {1, 2, 1, 4, 2}};
  }
  const int count = param(m.params, "count", 200);
  const int coarse = param(m.params, "coarse", 16), fine = param(m.params, "fine", 32);
  const double L = param(m.params, "L", 8.0);
  const int band = param(m.params, "band", 3);
  CsvWriter csv((m.out / "gn.csv").string(),
                {"n", "m", "alpha", "r", "q", "seed", "coarse", "fine", "rel_change"});
  for (const auto& k : cases) {
    // 1/r + n/(2mq) = (n + 2|alpha|)/(4m)
    const Rational lhs = k.r.reciprocal() + Rational(k.n, 2 * k.m) * k.q.reciprocal();
    if (!(lhs == Rational(k.n + 2 * k.a, 4 * k.m)) || k.r.is_infinite() || k.q.is_infinite())
      throw SchemaError(fmt::format("gn case (n={}, m={}, |alpha|={}) has a non-scaling pair", k.n,
                                    k.m, k.a));
    std::vector<int> alpha(k.n, 0);
    alpha[0] = k.a;
    const ExponentPair p{k.r, k.q};
    const auto gc = make_grid(k.n, coarse, L, coarse, L);
    const auto gf = make_grid(k.n, fine, L, fine, L);
    double worst = 0.0, drift = 0.0;
    for (int i = 0; i < count; ++i) {
      const std::uint64_t seed = sub_seed(m.seed, 1000 + i);
      const double a = gagliardo_nirenberg_ratio(band_limited_field(gc, seed, band, band), alpha,
                                                 k.m, p);
      const double b = gagliardo_nirenberg_ratio(band_limited_field(gf, seed, band, band), alpha,
                                                 k.m, p);
      const double rel = std::abs(b - a) / a;
      worst = std::max(worst, std::max(a, b));
      drift = std::max(drift, rel);
      csv.row({csv_number(static_cast<long long>(k.n)), csv_number(static_cast<long long>(k.m)),
               csv_number(static_cast<long long>(k.a)), k.r.str(), k.q.str(),
               csv_number(static_cast<long long>(seed)), csv_number(a), csv_number(b),
               csv_number(rel)});
    }
    const auto tag = fmt::format("n{}_m{}_a{}", k.n, k.m, k.a);
    sum.add("max_ratio_" + tag, worst, INFINITY, anchor::gn);
    sum.add("refinement_" + tag, drift, param(m.params, "refinement_tol", 0.1), anchor::gn);
  }
}

void cmd_norms(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const int count = param(m.params, "count", 100);
  const auto ps = param_list(m.params, "p", {1.0, 2.0, 3.5});
  const auto ss = param_list(m.params, "s", {1.0, 1.5, 2.0, 3.0, 8.0, INFINITY});
  const double cell = g.spatial_cell();
  Rng rng(sub_seed(m.seed, 8));
  CsvWriter csv((m.out / "norms.csv").string(), {"trial", "p", "s", "lorentz", "lebesgue"});
  double worst = 0.0;
  int violations = 0;
  for (int trial = 0; trial < count; ++trial) {
    const auto f = random_spatial_field(g, rng);
    for (double p : ps) {
      double acc = 0.0;
      for (auto z : f.data) acc += std::pow(std::abs(z), p);
      const double lp = std::pow(acc * cell, 1.0 / p);
      worst = std::max(worst, std::abs(lorentz_norm(f, {p, p}, cell) - lp) / lp);
      double prev = INFINITY;
      for (double s : ss) {
        const double v = lorentz_norm(f, {p, s}, cell);
        if (v > prev * (1.0 + 1e-12)) ++violations;
        prev = v;
        csv.row({csv_number(static_cast<long long>(trial)), csv_number(p), csv_number(s),
                 csv_number(v), csv_number(lp)});
      }
    }
  }
  sum.add("lpp_equals_lp", worst, 1e-12, anchor::lorentz);
  sum.add("secondary_monotonicity_violations", violations, 0.0, anchor::lorentz);
}

void cmd_solve(const RunManifest& m, Summary& sum) {
  const auto& g = m.grid;
  const auto c = load_coefficients(m);
  Field f;
  const std::string rhs = param(m.params, "rhs", std::string());
  if (rhs.empty()) {
    f = band_limited_field(g, sub_seed(m.seed, 9), 2, 3);
  } else {
    f = read_field(resolve(m, rhs).string());
    check_same_grid(f.grid, g);
  }
  const auto res = solve_variational(c, f, m.solver);
  const std::string out = param(m.params, "out", std::string());
  write_field(out.empty() ? (m.out / "solution.gof").string() : resolve(m, out).string(), res.u);
  const std::string report = param(m.params, "report", std::string());
  CsvWriter csv(report.empty() ? (m.out / "solve.csv").string() : resolve(m, report).string(),
                {"iterations", "residual", "converged", "delta", "inverse_bound",
                 "inverse_bound_limit", "wall_time"});
  const auto& r = res.report;
  csv.row({csv_number(static_cast<long long>(r.iterations)), csv_number(r.residual),
           csv_bool(r.converged), csv_number(r.delta), csv_number(r.inverse_bound),
           csv_number(r.inverse_bound_limit), csv_number(r.wall_time)});
  if (r.certificate)
    sum.add("coercivity_certificate", r.certificate->min_ratio, r.certificate->threshold,
            anchor::coercive, true);
  sum.add("residual", r.residual, m.solver.tol, anchor::residual);
  sum.add("inverse_bound", r.inverse_bound, r.inverse_bound_limit, anchor::inverse);
  if (!r.converged) fail(ErrorKind::not_converged, "solver stopped at max_iter");
}

void write_summary(const RunManifest& m, const Summary& sum) {
  std::ofstream os(m.out / "summary.json");
  os << sum.to_json().dump(2) << '\n';
}

}  // namespace

int run(const RunManifest& m) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(m.out, ec);
  if (ec || !fs::is_directory(m.out)) {
    fmt::print(stderr, "greenop: output directory {} is not writable\n", m.out.string());
    return bad_input;
  }
  Summary sum;
  sum.command = m.command;
  int status = ok;
  try {
    if (m.command == "verify") cmd_verify(m, sum);
    else if (m.command == "green") cmd_green(m, sum);
    else if (m.command == "cauchy") cmd_cauchy(m, sum);
    else if (m.command == "offdiag") cmd_offdiag(m, sum);
    else if (m.command == "gaussian") cmd_gaussian(m, sum);
    else if (m.command == "coulomb") cmd_coulomb(m, sum);
    else if (m.command == "gn") cmd_gn(m, sum);
    else if (m.command == "norms") cmd_norms(m, sum);
    else if (m.command == "solve") cmd_solve(m, sum);
    status = sum.pass() ? ok : check_failed;
  } catch (const SchemaError& e) {
    sum.error = e.what();
    status = bad_input;
  } catch (const Error& e) {
    sum.error = e.what();
    switch (e.kind()) {
      case ErrorKind::not_converged: status = not_converged; break;
      case ErrorKind::not_elliptic:
      case ErrorKind::not_causal: status = check_failed; break;
      default: status = bad_input;
    }
  }
  sum.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_summary(m, sum);
  if (!sum.error.empty()) fmt::print(stderr, "greenop {}: {}\n", m.command, sum.error);
  return status;
}

}  // namespace greenop::cli
