#pragma once

#include "stokesdd/assembly.hpp"
#include "stokesdd/partition.hpp"

namespace stokesdd {

/// Per-subdomain blocks in the split basis. The local "r" vector stacks
/// (u_I, p_I, u_dual); Arr is the corresponding saddle matrix, ArP its
/// coupling to local primal DOFs. Bg_* are the rows of this subdomain's
/// contribution to the interface-pressure constraints.
struct LocalBlocks {
  int n_uI = 0, n_pI = 0, n_dual = 0, n_primal_loc = 0, n_pgamma_loc = 0;
  std::vector<int> primal_global;  // ascending
  std::vector<int> pgamma_local;   // global interface-pressure indices, ascending

  SpMat Arr;   // (n_uI + n_pI + n_dual)^2
  SpMat ArP;   // x n_primal_loc
  SpMat App;   // n_primal_loc^2, local primal stiffness
  SpMat A_dd;  // n_dual^2 velocity block (preconditioner input)
  SpMat Bg_I, Bg_D, Bg_P;  // n_pgamma_loc rows
  Vec f_r;     // (f_I; 0; f_dual), one-sided load integrals

  // Change of basis, local nodal velocity (comp-major over nodal_nodes) to
  // class coordinates: u_nodal = T_I u_I + T_D u_dual + T_P u_primal_local.
  SpMat T_I, T_D, T_P;
  // Discontinuous pressure: interior basis over the subdomain's macro cells
  // (indicators of all cells except the dropped one); cell values =
  // Tq_dev * p_I + constant, and the constant equals the dropped cell's value.
  SpMat Tq_dev;
  int dropped_cell = 0;

  int n_r() const { return n_uI + n_pI + n_dual; }
  int uI_base() const { return 0; }
  int pI_base() const { return n_uI; }
  int dual_base() const { return n_uI + n_pI; }
};

struct SaddleBlocks {
  CoarseSpace coarse = CoarseSpace::CornersOnly;
  PressureKind pkind = PressureKind::Continuous;
  double h = 0.0, H = 0.0;
  int n_primal = 0, n_pgamma = 0, n_dual_total = 0, n_lambda = 0;
  std::vector<LocalBlocks> sub;
  std::vector<int> r_offset;
  int n_r_total = 0;
  Vec f_pi;  // assembled primal load

  int sub_count() const { return static_cast<int>(sub.size()); }
};

SaddleBlocks build_saddle_blocks(const MeshPair& mesh_pair, const MixedSystem& system,
                                 const DofPartition& partition, int threads = 1);

/// Vector over the full split system (u_I, p_I, u_dual per subdomain; u_pi;
/// p_gamma; lambda).
struct BigVec {
  Vec r;       // concatenated subdomain blocks
  Vec pi;      // primal velocity
  Vec pgamma;  // interface pressure
  Vec lambda;  // multipliers
};

BigVec zero_big_vec(const SaddleBlocks& blocks);

/// Applies the full split operator (the permuted saddle system plus
/// continuity constraints) to a BigVec.
BigVec apply_big_operator(const SaddleBlocks& blocks, const JumpOperators& jumps,
                          const BigVec& x);

/// Coefficients of the constant-pressure function in split coordinates:
/// ones on interior pressure nodes and interface nodes (continuous), or zero
/// deviations and ones on the subdomain constants (discontinuous).
void pressure_constant_coords(const SaddleBlocks& blocks, Vec& r_pressure_part, Vec& pgamma);

/// Null vector (0, 1_pI, 0, 0, 1_pGamma, lambda0) of the split operator and
/// its reduced-space restriction (1_pGamma, lambda0).
struct NullBasis {
  BigVec full;
  Vec reduced;  // [pgamma; lambda]
  double norm = 0.0;
};

NullBasis build_null_basis(const SaddleBlocks& blocks, const JumpOperators& jumps);

/// Gathers the per-subdomain dual slices of a BigVec-style r vector into one
/// global dual vector, and the reverse scatter-add.
Vec gather_dual(const SaddleBlocks& blocks, const Vec& r);
void scatter_dual_add(const SaddleBlocks& blocks, const Vec& dual, Vec& r);

/// Expansion of split coordinates to the global free-velocity vector (nodal
/// contributions averaged by node multiplicity) and the global pressure vector.
Vec expand_velocity(const SaddleBlocks& blocks, const DofPartition& partition,
                    const MixedSystem& system, const BigVec& x);
Vec expand_pressure(const SaddleBlocks& blocks, const DofPartition& partition,
                    const MixedSystem& system, const BigVec& x);

/// Restriction of global (free velocity, pressure) vectors into split
/// coordinates; exact inverse of expansion for continuous inputs. Test and
/// oracle helper.
BigVec restrict_solution(const SaddleBlocks& blocks, const DofPartition& partition,
                         const MixedSystem& system, const Vec& u_free, const Vec& p);

/// Sum of per-subdomain nodal scatters; equals the assembled global operators
/// (reassembly oracle support). Returns the global-sized stiffness sum, the
/// divergence sum, and the load sum rebuilt from local pieces.
struct ReassembledGlobal {
  SpMat A;
  SpMat B;
  Vec f;
};
ReassembledGlobal reassemble_global(const MeshPair& mesh_pair, const MixedSystem& system,
                                    const DofPartition& partition);

} // namespace stokesdd
