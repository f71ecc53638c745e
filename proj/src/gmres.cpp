#include "greenop/gmres.hpp"

#include <cmath>

#include "greenop/error.hpp"
#include "greenop/kernels.hpp"

namespace greenop {

namespace {

double vnorm(const std::vector<cplx>& v) { return std::sqrt(kernels::omp::norm2(v.size(), v.data())); }

// Rotation zeroing b in (a, b): returns (c, s) with c real.
void givens(cplx a, cplx b, double& c, cplx& s) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (na == 0.0) {
    c = 0.0;
    s = std::conj(b) / nb;
    return;
  }
  const double r = std::hypot(na, nb);
  c = na / r;
  s = (a / na) * std::conj(b) / r;
}

}  // namespace

GmresResult gmres(const LinearMap& A, const std::vector<cplx>& b, std::vector<cplx>& x, double tol,
                  int max_iter, int restart) {
  require(tol > 0.0 && max_iter >= 1 && restart >= 1, ErrorKind::invalid_argument,
          "invalid GMRES parameters");
  const std::size_t N = b.size();
  if (x.size() != N) x.assign(N, 0.0);
  GmresResult res;
  const double bnorm = vnorm(b);
  if (bnorm == 0.0) {
    x.assign(N, 0.0);
    res.converged = true;
    return res;
  }
  std::vector<cplx> r(N), w(N);
  const int m = restart;
  std::vector<std::vector<cplx>> V(m + 1, std::vector<cplx>(N));
  std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, 0.0));
  std::vector<double> cs(m);
  std::vector<cplx> sn(m), g(m + 1);

  auto residual = [&]() {
    A(x, w);
    for (std::size_t i = 0; i < N; ++i) r[i] = b[i] - w[i];
    return vnorm(r);
  };

  double rnorm = residual();
  res.residual = rnorm / bnorm;
  while (res.iterations < max_iter) {
    if (rnorm <= tol * bnorm) {
      res.converged = true;
      break;
    }
    for (std::size_t i = 0; i < N; ++i) V[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;
    int k = 0;
    for (; k < m && res.iterations < max_iter; ++k) {
      ++res.iterations;
      A(V[k], w);
      for (int j = 0; j <= k; ++j) {
        H[j][k] = kernels::omp::dot(N, w.data(), V[j].data());
        kernels::omp::axpy(N, -H[j][k], V[j].data(), w.data());
      }
      const double h = vnorm(w);
      H[k + 1][k] = h;
      if (h > 0.0)
        for (std::size_t i = 0; i < N; ++i) V[k + 1][i] = w[i] / h;
      for (int j = 0; j < k; ++j) {
        const cplx t = cs[j] * H[j][k] + sn[j] * H[j + 1][k];
        H[j + 1][k] = -std::conj(sn[j]) * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = t;
      }
      givens(H[k][k], H[k + 1][k], cs[k], sn[k]);
      H[k][k] = cs[k] * H[k][k] + sn[k] * H[k + 1][k];
      H[k + 1][k] = 0.0;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) <= tol * bnorm || h == 0.0) {
        ++k;
        break;
      }
    }
    // Back substitution for the least-squares coefficients.
    std::vector<cplx> y(k);
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = s / H[i][i];
    }
    for (int j = 0; j < k; ++j) kernels::omp::axpy(N, y[j], V[j].data(), x.data());
    const double prev = rnorm;
    rnorm = residual();
    res.residual = rnorm / bnorm;
    if (rnorm <= tol * bnorm) {
      res.converged = true;
      break;
    }
    if (rnorm >= prev) break;  // stagnation
  }
  return res;
}

}  // namespace greenop
