#pragma once

#include <functional>
#include <vector>

#include "greenop/field.hpp"

namespace greenop {

using LinearMap = std::function<void(const std::vector<cplx>& x, std::vector<cplx>& y)>;

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||
  bool converged = false;
};

// Restarted GMRES with modified Gram-Schmidt and Givens rotations. x holds the
// initial guess on entry and the best iterate on exit.
GmresResult gmres(const LinearMap& A, const std::vector<cplx>& b, std::vector<cplx>& x, double tol,
                  int max_iter, int restart = 60);

}  // namespace greenop
