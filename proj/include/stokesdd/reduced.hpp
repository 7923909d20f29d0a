#pragma once

#include "stokesdd/blocks.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <memory>

namespace stokesdd {

/// Vector over the invertible leading part (u_I, p_I, u_dual per subdomain;
/// u_pi).
struct WtVec {
  Vec r;
  Vec pi;
};

/// Factored reduced system: per-subdomain LU of the indefinite local saddle
/// blocks, the explicit coarse Schur complement S_pi (SPD), and the operators
/// G = B_C Atilde^{-1} B_C^T and the lumped preconditioner on X = Q_Gamma + Lambda.
class ReducedSystem {
 public:
  ReducedSystem(const SaddleBlocks& blocks, const JumpOperators& jumps, int threads = 1);

  int dim() const { return blocks_.n_pgamma + blocks_.n_lambda; }
  const SaddleBlocks& blocks() const { return blocks_; }
  const JumpOperators& jumps() const { return jumps_; }
  const SpMat& coarse_matrix() const { return S_pi_; }

  /// One application: two independent subdomain solve sweeps plus one coarse
  /// solve.
  WtVec atilde_solve(const WtVec& f) const;

  /// w = B_C^T x scattered into the leading space.
  WtVec apply_bc_transpose(const Vec& x) const;
  /// y = B_C w.
  Vec apply_bc(const WtVec& w) const;

  Vec apply_G(const Vec& x) const;
  Vec reduced_rhs() const;  // g = B_C Atilde^{-1} (f_I; 0; f_dual; f_pi)
  Vec apply_preconditioner(const Vec& y) const;

  /// Interior/dual/primal unknowns for a converged interface solution.
  BigVec back_substitute(const Vec& x) const;

  // Instrumentation: counts accumulated across all applies.
  long local_solve_sweeps() const { return sweeps_; }
  long coarse_solves() const { return coarse_count_; }
  void reset_counters() const { sweeps_ = 0; coarse_count_ = 0; }

  double pressure_scale() const { return pressure_scale_; }

 private:
  const SaddleBlocks& blocks_;
  const JumpOperators& jumps_;
  int threads_ = 1;
  std::vector<std::unique_ptr<Eigen::SparseLU<SpMat>>> factors_;
  SpMat S_pi_;
  Eigen::SimplicialLDLT<SpMat> coarse_;
  double pressure_scale_ = 0.0;
  mutable long sweeps_ = 0;
  mutable long coarse_count_ = 0;
};

/// x minus its component along the reduced null vector; idempotent.
Vec project_out_null(const Vec& x, const NullBasis& nb);

/// Diagnostic only: recovers the mesh size scale by comparing nonzero entries
/// of the velocity stiffness (O(1)) and divergence coupling (O(h)) blocks.
double estimate_h_from_entries(const SpMat& A, const SpMat& B);

} // namespace stokesdd
