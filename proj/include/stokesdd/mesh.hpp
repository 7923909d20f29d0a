#pragma once

#include <array>
#include <string>
#include <vector>

namespace stokesdd {

/// Uniform triangulation of [0,1]^2: n x n square cells, each split along the
/// bottom-left to top-right diagonal. Nodes are numbered lexicographically
/// (x fastest); triangles cell-major, lower triangle before upper.
struct StructuredMesh {
  int cells_per_side = 0;
  double h = 0.0;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise

  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int nodes_per_side() const { return cells_per_side + 1; }
  int node_id(int i, int j) const { return j * (cells_per_side + 1) + i; }
  bool node_on_boundary(int node) const;
  double triangle_area(int tri) const;  // signed; positive for this layout
};

StructuredMesh build_structured_mesh(int cells_per_side);

/// Pressure mesh of size h plus its uniform refinement (size h/2) carrying the
/// velocity. Refining every cell 2x2 is exactly the edge-midpoint split of
/// each pressure triangle into four similar children.
struct MeshPair {
  StructuredMesh pressure;
  StructuredMesh velocity;
  std::vector<int> parent;  // velocity triangle -> pressure triangle

  double h() const { return pressure.h; }
};

MeshPair build_mesh_pair(int pressure_cells_per_side);

/// Square-block decomposition of the cell grid into nsub x nsub subdomains,
/// numbered row-major. Multiplicity of a grid point is the number of closed
/// subdomain squares containing it (1, 2, or 4).
struct SubdomainLayout {
  int nsub_per_side = 0;
  int cells_per_sub = 0;  // pressure cells per side within one subdomain
  double H = 0.0;

  int count() const { return nsub_per_side * nsub_per_side; }
  int sub_id(int bi, int bj) const { return bj * nsub_per_side + bi; }
  int sub_of_pressure_cell(int ci, int cj) const {
    return sub_id(ci / cells_per_sub, cj / cells_per_sub);
  }
  /// Grid line index i on a mesh with per_side cells along each axis; returns
  /// 2 when the line x_i lies on an interior subdomain boundary, else 1.
  int line_multiplicity(int i, int per_side) const;
  int node_multiplicity(int i, int j, int per_side) const;
};

SubdomainLayout build_subdomain_layout(const MeshPair& mesh_pair, int nsub_per_side);

/// Plain-text dump: counts line, then "x y" per node, then "i j k" per triangle.
void dump_mesh(const StructuredMesh& mesh, const std::string& path);

} // namespace stokesdd
