#pragma once

#include "stokesdd/assembly.hpp"
#include "stokesdd/reduced.hpp"

namespace stokesdd {

/// Brute-force reference computations on desk-scale instances. Everything here
/// is independent of the decomposed solve path.

struct DenseSolution {
  Vec u;  // free velocity DOFs
  Vec p;  // zero-average normalized
  double residual = 0.0;
};

/// Monolithic solve of the full saddle system with the pressure kernel removed
/// by a zero-mean Lagrange constraint. Refuses more than 20,000 total DOFs.
DenseSolution dense_solve_monolithic(const MixedSystem& system);

/// Columns of G assembled via apply_G on unit vectors. Guard: dim <= 3000.
Mat dense_reduced_matrix(const ReducedSystem& reduced);
Mat dense_preconditioner_matrix(const ReducedSystem& reduced);

/// Ascending eigenvalues of a symmetric matrix.
Vec symmetric_eigenvalues(const Mat& m);

struct SpectrumSummary {
  double min_nonzero = 0.0;
  double max = 0.0;
  int zero_count = 0;  // |lambda| <= 1e-9 * max
};

/// Spectrum of M^{-1} G computed by a symmetric similarity transform with the
/// Cholesky factor of M^{-1}.
SpectrumSummary preconditioned_spectrum(const ReducedSystem& reduced);
SpectrumSummary spectrum_summary(const Vec& eigenvalues);

/// Inf-sup constant: sqrt of the smallest nonzero eigenvalue of
/// (B A^{-1} B^T) q = mu Z q on the zero-average pressure subspace.
double estimate_inf_sup(const MixedSystem& system);

} // namespace stokesdd
