#include "stokesdd/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <stdexcept>

namespace stokesdd {

DenseSolution dense_solve_monolithic(const MixedSystem& system) {
  const int nf = system.free_dof_count();
  const int np = system.n_pressure;
  if (nf + np > 20000) {
    throw std::invalid_argument("oracle: monolithic solve limited to 20000 DOFs, got " +
                                std::to_string(nf + np));
  }
  const Vec z = system.Z * Vec::Ones(np);  // zero-mean constraint weights
  const int n = nf + np + 1;
  std::vector<Triplet> trips;
  trips.reserve(system.A.nonZeros() + 2 * system.B.nonZeros() + 2 * np);
  for (int k = 0; k < system.A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(system.A, k); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < system.B.outerSize(); ++k) {
    for (SpMat::InnerIterator it(system.B, k); it; ++it) {
      trips.emplace_back(nf + static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
      trips.emplace_back(static_cast<int>(it.col()), nf + static_cast<int>(it.row()),
                         it.value());
    }
  }
  for (int i = 0; i < np; ++i) {
    trips.emplace_back(nf + i, nf + np, z[i]);
    trips.emplace_back(nf + np, nf + i, z[i]);
  }
  SpMat k(n, n);
  k.setFromTriplets(trips.begin(), trips.end());

  Vec rhs = Vec::Zero(n);
  rhs.head(nf) = system.f;
  Eigen::SparseLU<SpMat> lu(k);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("oracle: monolithic factorization failed");
  }
  const Vec sol = lu.solve(rhs);

  DenseSolution out;
  out.u = sol.head(nf);
  out.p = sol.segment(nf, np);
  // Exact zero-mean alignment; 1^T Z 1 equals the domain area, which is 1.
  out.p -= Vec::Ones(np) * z.dot(out.p);

  const Vec res_u = system.A * out.u + system.B.transpose() * out.p - system.f;
  const Vec res_p = system.B * out.u;
  const double scale = std::max(system.f.norm(), 1e-300);
  out.residual = std::sqrt(res_u.squaredNorm() + res_p.squaredNorm()) / scale;
  return out;
}

Mat dense_reduced_matrix(const ReducedSystem& reduced) {
  const int n = reduced.dim();
  if (n > 3000) {
    throw std::invalid_argument("oracle: dense reduced matrix limited to dim 3000");
  }
  Mat g(n, n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    g.col(j) = reduced.apply_G(e);
    e[j] = 0.0;
  }
  return g;
}

Mat dense_preconditioner_matrix(const ReducedSystem& reduced) {
  const int n = reduced.dim();
  if (n > 3000) {
    throw std::invalid_argument("oracle: dense preconditioner limited to dim 3000");
  }
  Mat m(n, n);
  Vec e = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = reduced.apply_preconditioner(e);
    e[j] = 0.0;
  }
  return m;
}

Vec symmetric_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SpectrumSummary spectrum_summary(const Vec& eigenvalues) {
  SpectrumSummary s;
  s.max = eigenvalues.maxCoeff();
  const double tol = 1e-9 * std::abs(s.max);
  s.min_nonzero = s.max;
  for (int i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues[i]) <= tol) {
      ++s.zero_count;
    } else if (eigenvalues[i] < s.min_nonzero) {
      s.min_nonzero = eigenvalues[i];
    }
  }
  return s;
}

SpectrumSummary preconditioned_spectrum(const ReducedSystem& reduced) {
  const Mat g = dense_reduced_matrix(reduced);
  const Mat minv = dense_preconditioner_matrix(reduced);
  Eigen::LLT<Mat> llt(0.5 * (minv + minv.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("oracle: preconditioner is not positive definite");
  }
  const Mat l = llt.matrixL();
  const Mat c = l.transpose() * g * l;  // similar to M^{-1} G
  return spectrum_summary(symmetric_eigenvalues(c));
}

double estimate_inf_sup(const MixedSystem& system) {
  const int nf = system.free_dof_count();
  const int np = system.n_pressure;
  if (nf > 20000 || np > 2500) {
    throw std::invalid_argument("oracle: inf-sup estimate limited to desk-scale systems");
  }
  Eigen::SparseLU<SpMat> lu(system.A);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("oracle: velocity stiffness factorization failed");
  }
  const Mat bt = Mat(system.B).transpose();
  const Mat ainv_bt = lu.solve(bt);
  const Mat s = bt.transpose() * ainv_bt;  // B A^{-1} B^T
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()), Mat(system.Z),
                                                   Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  const Vec mu = es.eigenvalues();
  // Smallest eigenvalue belongs to the constant-pressure kernel; the next one
  // is beta^2.
  return std::sqrt(std::max(mu(1), 0.0));
}

} // namespace stokesdd
