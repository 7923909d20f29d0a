#pragma once

#include "stokesdd/assembly.hpp"
#include "stokesdd/mesh.hpp"
#include "stokesdd/types.hpp"

#include <string>
#include <vector>

namespace stokesdd {

/// Open segment of the interface between two neighboring subdomains.
/// sub_lo is always the smaller subdomain id; jump rows put +1 on its copy.
struct InterfaceEdge {
  int axis = 0;  // 0: vertical (constant x), 1: horizontal (constant y)
  int sub_lo = 0;
  int sub_hi = 0;
  std::vector<int> vnodes;  // velocity nodes strictly inside, ordered along the edge
};

struct EdgeRef {
  int edge = 0;       // index into DofPartition::edges
  int dual_base = 0;  // first local dual index of this edge's block
};

/// Per-subdomain DOF sets. Velocity components are comp-major within each
/// class. Dual blocks are ordered edge-major, then component, then position
/// (nodal values, or zero-mean deviations when edge averages are primal).
struct SubdomainDofs {
  std::vector<int> interior_nodes;  // free velocity nodes owned only by this subdomain
  std::vector<int> corner_nodes;    // adjacent interior cross points
  std::vector<EdgeRef> edge_refs;   // adjacent interface edges, ascending edge id
  std::vector<int> primal_global;   // global primal indices touched, ascending
  std::vector<int> nodal_nodes;     // all free velocity nodes of the local problem, sorted
  std::vector<int> p_interior;      // continuous: interior pressure nodes
  std::vector<int> cells;           // discontinuous: owned macro cells (coarse triangles)
  int n_dual = 0;
  int dual_offset = 0;
};

struct DofPartition {
  CoarseSpace coarse = CoarseSpace::CornersOnly;
  PressureKind pkind = PressureKind::Continuous;
  SubdomainLayout layout;
  int n_vel_cells_per_side = 0;  // velocity mesh cells per side

  std::vector<InterfaceEdge> edges;
  std::vector<int> corner_nodes;  // interior subdomain vertices, sorted node id
  int n_primal = 0;               // 2*corners (+ one normal average per edge)

  std::vector<SubdomainDofs> subs;
  int n_dual_total = 0;
  int n_lambda = 0;
  std::vector<int> edge_lambda_offset;  // per edge, row base in the multiplier space

  // Interface pressure: continuous -> shared coarse nodes; discontinuous ->
  // one constant per subdomain (gamma index = subdomain id).
  std::vector<int> pgamma_nodes;
  std::vector<int> pressure_node_to_gamma;  // continuous only, -1 if interior
  int n_pgamma = 0;

  std::vector<int> vel_node_multiplicity;  // per velocity node, in {1,2,4}

  // With edge averages in the coarse space, only the component normal to the
  // edge is constrained; the dual space loses one direction there while the
  // tangential component keeps all of its nodal values.
  int dual_per_comp(int edge, int comp) const {
    const int m = static_cast<int>(edges[edge].vnodes.size());
    return coarse == CoarseSpace::CornersEdges && comp == edges[edge].axis ? m - 1 : m;
  }
  int edge_dual_size(int edge) const { return dual_per_comp(edge, 0) + dual_per_comp(edge, 1); }
  int dual_comp_base(int edge, int comp) const { return comp == 0 ? 0 : dual_per_comp(edge, 0); }
  int n_corner_primal() const { return 2 * static_cast<int>(corner_nodes.size()); }
  int primal_of_corner(int corner_idx, int comp) const { return 2 * corner_idx + comp; }
  int primal_of_edge(int edge) const { return n_corner_primal() + edge; }
  int n_pI(int s) const {
    return pkind == PressureKind::Continuous
               ? static_cast<int>(subs[s].p_interior.size())
               : static_cast<int>(subs[s].cells.size()) - 1;
  }
  int n_uI(int s) const { return 2 * static_cast<int>(subs[s].interior_nodes.size()); }
  int n_r(int s) const { return n_uI(s) + n_pI(s) + subs[s].n_dual; }
};

/// Classifies every free DOF into interior/dual/primal velocity and
/// interior/interface pressure. Pressure DOFs whose basis support touches two
/// or more subdomains are interface class; this keeps the divergence rows of
/// interior pressures local to one subdomain, so the leading reduced block
/// stays block-diagonal.
DofPartition classify_dofs(const MeshPair& mesh_pair, const SubdomainLayout& layout,
                           CoarseSpace coarse, PressureKind pkind);

/// Signed jump operators on the dual space. Each multiplier row references the
/// two copies of one dual DOF: +1 on the lower subdomain id, -1 on the higher.
/// The scaled variant multiplies each entry by 1/N_x of the underlying nodes.
struct JumpOperators {
  SpMat B_delta;    // n_lambda x n_dual_total
  SpMat B_delta_d;  // scaled
  int lambda_dim = 0;
};

JumpOperators build_jump_operators(const DofPartition& partition);

/// Counts per class per subdomain as a JSON document.
std::string partition_stats_json(const DofPartition& partition);

} // namespace stokesdd
