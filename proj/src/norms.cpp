#include "greenop/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "greenop/calculus.hpp"
#include "greenop/error.hpp"
#include "greenop/fft.hpp"
#include "greenop/kernels.hpp"
#include "greenop/multiplier.hpp"

namespace greenop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_of(const std::vector<double>& mags, double p, double w) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mags) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : mags) s += std::pow(v, p);
  return std::pow(s * w, 1.0 / p);
}

std::vector<double> slice_abs(const Field& u, int j) {
  const std::size_t S = u.grid.spatial_size();
  std::vector<double> m(S);
  const cplx* s = u.slice(j);
  for (std::size_t x = 0; x < S; ++x) m[x] = std::abs(s[x]);
  return m;
}

// k^a - (k-1)^a without cancellation.
double step_increment(double k, double a) {
  if (k <= 1.0) return 1.0;
  return std::pow(k, a) * -std::expm1(a * std::log1p(-1.0 / k));
}

}  // namespace

double mixed_lebesgue_norm(const Field& u, const ExponentPair& p) {
  const auto& g = u.grid;
  const double q = p.q.value(), r = p.r.value();
  std::vector<double> profile(g.Nt);
  for (int j = 0; j < g.Nt; ++j) profile[j] = lp_of(slice_abs(u, j), q, g.spatial_cell());
  return lp_of(profile, r, g.dt);
}

double lorentz_norm_abs(std::vector<double> f, const LorentzIndex& idx, double cell) {
  require(idx.p >= 1.0 && idx.s >= 1.0 && cell > 0, ErrorKind::invalid_argument,
          "Lorentz exponents must be >= 1");
  if (f.empty()) return 0.0;
  if (std::isinf(idx.p)) return *std::max_element(f.begin(), f.end());
  std::sort(f.begin(), f.end(), std::greater<double>());
  const double p = idx.p, s = idx.s;
  if (std::isinf(s)) {
    double m = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] == 0.0) break;
      m = std::max(m, std::pow((k + 1) * cell, 1.0 / p) * f[k]);
    }
    return m;
  }
  // (s/p) int_0^inf (t^{1/p} f*)^s dt/t over steps of width cell.
  const double a = s / p;
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] == 0.0) break;
    acc += std::pow(f[k], s) * step_increment(static_cast<double>(k + 1), a);
  }
  return std::pow(acc * std::pow(cell, a), 1.0 / s);
}

double lorentz_norm(const SpatialField& samples, const LorentzIndex& idx, double cell) {
  std::vector<double> m(samples.size());
  for (std::size_t x = 0; x < m.size(); ++x) m[x] = std::abs(samples[x]);
  return lorentz_norm_abs(std::move(m), idx, cell);
}

double mixed_lorentz_norm(const Field& u, const LorentzIndex& time_idx,
                          const LorentzIndex& space_idx) {
  const auto& g = u.grid;
  std::vector<double> profile(g.Nt);
  for (int j = 0; j < g.Nt; ++j)
    profile[j] = lorentz_norm_abs(slice_abs(u, j), space_idx, g.spatial_cell());
  return lorentz_norm_abs(std::move(profile), time_idx, g.dt);
}

namespace {

double weighted_spectral_norm(const Field& u, const std::function<double(double, double)>& w) {
  Field uh = forward_transform(u);
  const auto& g = u.grid;
  const std::size_t S = g.spatial_size();
  std::vector<double> xi2(S);
  for (std::size_t x = 0; x < S; ++x) xi2[x] = g.xi_squared(x);
  double acc = 0.0;
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = g.tau(k);
    for (std::size_t x = 0; x < S; ++x) {
      const double wt = w(tau, xi2[x]);
      acc += wt * wt * std::norm(uh(k, x));
    }
  }
  return std::sqrt(acc / g.volume());
}

}  // namespace

VdotNorms vdot_norm(const Field& u) {
  const Field v = remove_joint_mean(u);
  VdotNorms out;
  out.multiplier = weighted_spectral_norm(
      v, [](double tau, double xi2) { return std::sqrt(std::abs(tau) + xi2); });
  double s = 0.0;
  for (const auto& d : gradient(v)) s += std::pow(norm(d), 2);
  s += std::pow(norm(apply_multiplier(v, MultiplierSymbol::time_fraction(v.grid, 0.5))), 2);
  out.gradient = std::sqrt(s);
  return out;
}

double inhomogeneous_norm(const Field& u) {
  return weighted_spectral_norm(
      u, [](double tau, double xi2) { return std::sqrt(1.0 + std::abs(tau) + xi2); });
}

double vdot_dual_norm(const Field& f) {
  return weighted_spectral_norm(f, [](double tau, double xi2) {
    const double w = std::abs(tau) + xi2;
    return w == 0.0 ? 0.0 : 1.0 / std::sqrt(w);
  });
}

double inhomogeneous_dual_norm(const Field& f) {
  return weighted_spectral_norm(
      f, [](double tau, double xi2) { return 1.0 / std::sqrt(1.0 + std::abs(tau) + xi2); });
}

double h_theta_norm(const Field& w, double theta) {
  require(theta >= 0.0 && theta < 1.0, ErrorKind::invalid_argument, "theta must lie in [0,1)");
  Field wh = forward_transform(w);
  const auto& g = w.grid;
  const std::size_t S = g.spatial_size();
  double total = 0.0, lost = 0.0, acc = 0.0;
  for (int k = 0; k < g.Nt; ++k) {
    const double tau = std::abs(g.tau(k));
    for (std::size_t x = 0; x < S; ++x) {
      const double m2 = std::norm(wh(k, x));
      total += m2;
      const double xi = std::sqrt(g.xi_squared(x));
      const bool vanish = xi == 0.0 || (theta > 0.0 && tau == 0.0);
      if (vanish) {
        lost += m2;
        continue;
      }
      const double wt = std::pow(tau, -0.5 * theta) * std::pow(xi, -(1.0 - theta));
      acc += wt * wt * m2;
    }
  }
  require(lost <= 1e-24 * std::max(total, 1e-300), ErrorKind::invalid_argument,
          "datum is not in H^{-theta}: mass on a zero-weight mode");
  return std::sqrt(acc / g.volume());
}

namespace {

double coefficient_norm(const Field& f, const ExponentPair& p, bool lorentz) {
  if (!lorentz) return mixed_lebesgue_norm(f, p);
  return mixed_lorentz_norm(f, {p.r.value(), kInf}, {p.q.value(), kInf});
}

}  // namespace

double coefficient_size(const CoefficientSet& c, const ExponentPair& p, bool lorentz) {
  require(is_compatible(p, c.grid.n), ErrorKind::invalid_argument,
          "coefficient size needs a compatible pair");
  const auto& g = c.grid;
  double P = 0.0;
  P += std::sqrt(coefficient_norm(squared_magnitude(c.avec, g), p, lorentz));
  P += std::sqrt(coefficient_norm(squared_magnitude(c.bvec, g), p, lorentz));
  P += coefficient_norm(c.a0.to_field(g), p, lorentz);
  return P;
}

EpsilonDecomposition epsilon_decomposition(const Field& coeff, const ExponentPair& p, double eps,
                                           double max_height) {
  require(eps >= 0.0, ErrorKind::invalid_argument, "epsilon must be non-negative");
  std::vector<double> heights;
  heights.reserve(coeff.size() + 1);
  heights.push_back(0.0);
  for (const auto& z : coeff.data) heights.push_back(std::abs(z));
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

  auto tail = [&](double M) {
    Field s(coeff.grid);
    for (std::size_t i = 0; i < coeff.size(); ++i)
      if (std::abs(coeff.data[i]) > M) s.data[i] = coeff.data[i];
    return s;
  };
  // The tail norm is non-increasing in M; bisect over the sample heights.
  std::size_t lo = 0, hi = heights.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (mixed_lebesgue_norm(tail(heights[mid]), p) <= eps) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  EpsilonDecomposition out;
  out.height = heights[lo];
  out.small = tail(out.height);
  out.bounded = coeff - out.small;
  out.report.epsilon = eps;
  out.report.P_small = mixed_lebesgue_norm(out.small, p);
  double sup = 0.0;
  for (const auto& z : out.bounded.data) sup = std::max(sup, std::abs(z));
  out.report.P_inf = sup;
  if (out.height > max_height) {
    out.ok = false;
    out.message = p.r.is_infinite()
                      ? "truncation at admissible height cannot make the sup-in-time norm small"
                      : "required truncation height exceeds the admissible bound";
  }
  return out;
}

CoefficientSize coefficient_decomposition(const CoefficientSet& c, const ExponentPair& p,
                                          double eps) {
  const auto& g = c.grid;
  CoefficientSize out;
  out.epsilon = eps;
  for (const auto* v : {&c.avec, &c.bvec}) {
    const auto d = epsilon_decomposition(squared_magnitude(*v, g), p, eps * eps);
    out.P_small += std::sqrt(d.report.P_small);
    out.P_inf += std::sqrt(d.report.P_inf);
  }
  const auto d0 = epsilon_decomposition(c.a0.to_field(g), p, eps);
  out.P_small += d0.report.P_small;
  out.P_inf += std::sqrt(d0.report.P_inf);
  return out;
}

double p_infinity(const CoefficientSet& c) {
  const auto& g = c.grid;
  auto sup_mag = [&](const std::vector<CoeffField>& v) {
    const Field m = squared_magnitude(v, g);
    double s = 0.0;
    for (const auto& z : m.data) s = std::max(s, z.real());
    return std::sqrt(s);
  };
  return sup_mag(c.avec) + sup_mag(c.bvec) + std::sqrt(c.a0.max_abs());
}

double gagliardo_nirenberg_ratio(const Field& u, const std::vector<int>& alpha, int m,
                                 const ExponentPair& p, TimeRange interval) {
  const auto& g = u.grid;
  int order = 0;
  for (int a : alpha) order += a;
  require(m >= 1 && order <= m, ErrorKind::invalid_argument, "need |alpha| <= m");
  const double r = p.r.value(), q = p.q.value();
  require(std::isfinite(r) && std::isfinite(q) && r >= 2.0 && q >= 2.0,
          ErrorKind::invalid_argument, "need 2 <= r, q < inf");
  // 1/r + n/(2mq) = (n + 2|alpha|)/(4m), exactly.
  const Rational lhs = p.r.reciprocal() + Rational(g.n, 2 * m) * p.q.reciprocal();
  require(lhs == Rational(g.n + 2 * order, 4 * m), ErrorKind::invalid_argument,
          "exponent relation violated");
  const int j0 = interval.begin;
  const int j1 = interval.end < 0 ? g.Nt : interval.end;
  require(0 <= j0 && j0 < j1 && j1 <= g.Nt, ErrorKind::invalid_argument, "bad time interval");

  const Field du = partial(u, alpha);
  const Field dm = gradient_power(u, m);
  const LorentzIndex inner{q, 2.0};
  double lhs_acc = 0.0, grad2 = 0.0, sup2 = 0.0;
  for (int j = j0; j < j1; ++j) {
    lhs_acc += std::pow(lorentz_norm_abs(slice_abs(du, j), inner, g.spatial_cell()), r);
    const cplx* s = dm.slice(j);
    const cplx* v = u.slice(j);
    double a = 0.0, b = 0.0;
    for (std::size_t x = 0; x < g.spatial_size(); ++x) {
      a += std::norm(s[x]);
      b += std::norm(v[x]);
    }
    grad2 += a * g.spatial_cell();
    sup2 = std::max(sup2, b * g.spatial_cell());
  }
  const double num = std::pow(lhs_acc * g.dt, 1.0 / r);
  const double gradL2 = std::sqrt(grad2 * g.dt);
  const double supL2 = std::sqrt(sup2);
  if (num == 0.0) return 0.0;
  require(gradL2 > 0.0 && supL2 > 0.0, ErrorKind::invalid_argument, "zero denominator");
  return num / (std::pow(gradL2, 2.0 / r) * std::pow(supL2, 1.0 - 2.0 / r));
}

}  // namespace greenop
