#pragma once

#include "stokesdd/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stokesdd {

using ApplyFn = std::function<Vec(const Vec&)>;
using ProjectFn = std::function<Vec(const Vec&)>;

struct CGOptions {
  double tol = 1e-6;
  int maxit = 500;
  int project_every = 50;           // 0 disables periodic projection
  std::string residual_log;         // CSV path; empty disables
};

struct CGReport {
  Vec x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // ||r_k||_2 including r_0
  std::vector<double> alphas;
  std::vector<double> betas;
  double ritz_min = 0.0;
  double ritz_max = 0.0;
};

/// Preconditioned CG with zero initial guess on an SPSD operator. Stops when
/// ||r_k|| / ||r_0|| <= tol in the plain Euclidean norm. The optional project
/// hook removes null-space drift from the initial residual and every
/// project_every iterations. Breakdown (<p, Gp> <= 0 or <r, M^{-1} r> <= 0)
/// throws; it signals loss of range confinement and must not occur.
CGReport pcg(const ApplyFn& apply_G, const ApplyFn& apply_M, const Vec& g,
             const CGOptions& opts = {}, const ProjectFn& project = {});

/// Extreme eigenvalues of the Lanczos tridiagonal assembled from CG scalars:
/// T(j,j) = 1/alpha_j + beta_{j-1}/alpha_{j-1}, T(j,j+1) = sqrt(beta_j)/alpha_j.
std::pair<double, double> ritz_extremes(const std::vector<double>& alphas,
                                        const std::vector<double>& betas);
std::pair<double, double> ritz_extremes(const CGReport& report);

} // namespace stokesdd
