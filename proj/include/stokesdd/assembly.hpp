#pragma once

#include "stokesdd/mesh.hpp"
#include "stokesdd/quadrature.hpp"
#include "stokesdd/types.hpp"

#include <array>
#include <functional>

namespace stokesdd {

using VectorField = std::function<std::array<double, 2>(double, double)>;

/// Gradients of the three P1 basis functions on a triangle (constant).
std::array<std::array<double, 2>, 3> p1_gradients(const StructuredMesh& mesh, int tri);

/// Closed-form element kernels.
Eigen::Matrix3d p1_stiffness_local(const StructuredMesh& mesh, int tri);
Eigen::Matrix3d p1_mass_local(double area);

/// Barycentric coordinates of point (x, y) with respect to a triangle of the
/// given mesh.
std::array<double, 3> barycentric(const StructuredMesh& mesh, int tri, double x, double y);

/// Full (pre-elimination) operators. Velocity DOFs are stored as two stacked
/// scalar fields: dof = comp * node_count + node.
struct AssembledOperators {
  SpMat A;  // vector Laplacian, (2 Nv)^2
  SpMat B;  // negative divergence coupling, n_pressure x 2 Nv
  SpMat Z;  // pressure Gram matrix
  Vec f;    // load, 2 Nv
};

SpMat assemble_stiffness(const MeshPair& mesh_pair);
SpMat assemble_divergence(const MeshPair& mesh_pair, PressureKind kind);
SpMat assemble_pressure_mass(const StructuredMesh& pressure_mesh);
/// P1 mass (continuous) or macro-cell area diagonal (discontinuous).
SpMat assemble_pressure_gram(const MeshPair& mesh_pair, PressureKind kind);
Vec assemble_load(const MeshPair& mesh_pair, const VectorField& f);
Vec assemble_load_with_rule(const MeshPair& mesh_pair, const VectorField& f,
                            const std::vector<TriQuadPoint>& rule);

AssembledOperators assemble_full(const MeshPair& mesh_pair, PressureKind kind,
                                 const VectorField& f);

/// Mixed system with homogeneous Dirichlet velocity DOFs eliminated.
/// Free velocity DOFs stay comp-major: dof = comp * free_node_count + free node.
struct MixedSystem {
  PressureKind pressure_kind = PressureKind::Continuous;
  int n_vel_nodes = 0;       // scalar nodes of the velocity mesh
  int n_free_vel_nodes = 0;  // scalar nodes not on the boundary
  int n_pressure = 0;        // P1 nodes or macro cells
  std::vector<int> node_to_free;  // -1 for Dirichlet nodes
  std::vector<int> free_to_node;
  SpMat A;
  SpMat B;
  SpMat Z;
  Vec f;

  int free_dof_count() const { return 2 * n_free_vel_nodes; }
  int free_dof(int comp, int free_node) const { return comp * n_free_vel_nodes + free_node; }
};

MixedSystem eliminate_dirichlet(const MeshPair& mesh_pair, const AssembledOperators& ops,
                                PressureKind kind);

/// assemble_full + eliminate_dirichlet with the standard body force.
MixedSystem build_mixed_system(const MeshPair& mesh_pair, PressureKind kind);
MixedSystem build_mixed_system(const MeshPair& mesh_pair, PressureKind kind,
                               const VectorField& f);

} // namespace stokesdd
