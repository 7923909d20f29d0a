#include "stokesdd/pcg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stokesdd {

std::pair<double, double> ritz_extremes(const std::vector<double>& alphas,
                                        const std::vector<double>& betas) {
  const int k = static_cast<int>(alphas.size());
  if (k == 0) throw std::invalid_argument("ritz: no completed iterations");
  Mat t = Mat::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    t(j, j) = 1.0 / alphas[j];
    if (j > 0) t(j, j) += betas[j - 1] / alphas[j - 1];
    if (j + 1 < k) {
      const double off = std::sqrt(betas[j]) / alphas[j];
      t(j, j + 1) = off;
      t(j + 1, j) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(t, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(k - 1)};
}

std::pair<double, double> ritz_extremes(const CGReport& report) {
  return ritz_extremes(report.alphas, report.betas);
}

CGReport pcg(const ApplyFn& apply_G, const ApplyFn& apply_M, const Vec& g,
             const CGOptions& opts, const ProjectFn& project) {
  CGReport rep;
  rep.x = Vec::Zero(g.size());

  std::ofstream log;
  if (!opts.residual_log.empty()) {
    log.open(opts.residual_log);
    if (!log) throw std::runtime_error("pcg: cannot open residual log " + opts.residual_log);
    log << "iteration,residual,ritz_min_so_far,ritz_max_so_far\n";
    log.precision(12);
  }

  Vec r = g;
  if (project) r = project(r);
  const double res0 = r.norm();
  rep.residual_history.push_back(res0);
  if (res0 == 0.0) {
    rep.converged = true;
    return rep;
  }
  if (log) log << 0 << "," << res0 << ",,\n";

  Vec z = apply_M(r);
  double rz = r.dot(z);
  if (rz <= 0.0) {
    throw std::runtime_error("pcg: breakdown, <r, M^{-1} r> <= 0 on the initial residual");
  }
  Vec p = z;

  for (int it = 0; it < opts.maxit; ++it) {
    const Vec q = apply_G(p);
    const double pq = p.dot(q);
    if (pq <= 0.0) {
      throw std::runtime_error("pcg: breakdown, <p, G p> <= 0 at iteration " +
                               std::to_string(it + 1));
    }
    const double alpha = rz / pq;
    rep.alphas.push_back(alpha);
    rep.x += alpha * p;
    r -= alpha * q;
    if (project && opts.project_every > 0 && (it + 1) % opts.project_every == 0) {
      r = project(r);
    }
    const double res = r.norm();
    rep.residual_history.push_back(res);
    rep.iterations = it + 1;

    if (log) {
      const auto [rmin, rmax] = ritz_extremes(rep.alphas, rep.betas);
      log << it + 1 << "," << res << "," << rmin << "," << rmax << "\n";
    }

    if (res / res0 <= opts.tol) {
      rep.converged = true;
      break;
    }
    z = apply_M(r);
    const double rz_next = r.dot(z);
    if (rz_next <= 0.0) {
      throw std::runtime_error("pcg: breakdown, <r, M^{-1} r> <= 0 at iteration " +
                               std::to_string(it + 1));
    }
    const double beta = rz_next / rz;
    rep.betas.push_back(beta);
    rz = rz_next;
    p = z + beta * p;
  }

  if (!rep.alphas.empty()) {
    std::tie(rep.ritz_min, rep.ritz_max) = ritz_extremes(rep.alphas, rep.betas);
  }
  return rep;
}

} // namespace stokesdd
