#include "stokesdd/mesh.hpp"

#include <fstream>
#include <stdexcept>

namespace stokesdd {

bool StructuredMesh::node_on_boundary(int node) const {
  const int per_row = cells_per_side + 1;
  const int i = node % per_row;
  const int j = node / per_row;
  return i == 0 || j == 0 || i == cells_per_side || j == cells_per_side;
}

double StructuredMesh::triangle_area(int tri) const {
  const auto& t = triangles[tri];
  const auto& a = nodes[t[0]];
  const auto& b = nodes[t[1]];
  const auto& c = nodes[t[2]];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

StructuredMesh build_structured_mesh(int cells_per_side) {
  if (cells_per_side < 1) {
    throw std::invalid_argument("mesh: cells_per_side must be positive");
  }
  StructuredMesh mesh;
  mesh.cells_per_side = cells_per_side;
  mesh.h = 1.0 / cells_per_side;
  const int n = cells_per_side;
  mesh.nodes.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes.push_back({i * mesh.h, j * mesh.h});
    }
  }
  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = mesh.node_id(i, j);
      const int br = mesh.node_id(i + 1, j);
      const int tr = mesh.node_id(i + 1, j + 1);
      const int tl = mesh.node_id(i, j + 1);
      mesh.triangles.push_back({bl, br, tr});  // lower
      mesh.triangles.push_back({bl, tr, tl});  // upper
    }
  }
  return mesh;
}

MeshPair build_mesh_pair(int pressure_cells_per_side) {
  MeshPair pair;
  pair.pressure = build_structured_mesh(pressure_cells_per_side);
  pair.velocity = build_structured_mesh(2 * pressure_cells_per_side);
  const int n = pressure_cells_per_side;
  const int nv = 2 * n;
  pair.parent.resize(pair.velocity.triangle_count());
  for (int cell = 0; cell < nv * nv; ++cell) {
    const int ci = cell % nv;
    const int cj = cell / nv;
    const int pi = ci / 2;
    const int pj = cj / 2;
    const int li = ci % 2;
    const int lj = cj % 2;
    const int pcell = pj * n + pi;
    for (int up = 0; up < 2; ++up) {
      // The fine lower-right quadrant lies entirely below the parent cell's
      // diagonal, the upper-left entirely above; on the diagonal quadrants the
      // fine split coincides with the parent split.
      int parent_up;
      if (li == lj) {
        parent_up = up;
      } else {
        parent_up = (li == 0) ? 1 : 0;
      }
      pair.parent[2 * cell + up] = 2 * pcell + parent_up;
    }
  }
  return pair;
}

int SubdomainLayout::line_multiplicity(int i, int per_side) const {
  const int r = per_side / nsub_per_side;
  return (i % r == 0 && i > 0 && i < per_side) ? 2 : 1;
}

int SubdomainLayout::node_multiplicity(int i, int j, int per_side) const {
  return line_multiplicity(i, per_side) * line_multiplicity(j, per_side);
}

SubdomainLayout build_subdomain_layout(const MeshPair& mesh_pair, int nsub_per_side) {
  const int n = mesh_pair.pressure.cells_per_side;
  if (nsub_per_side < 1) {
    throw std::invalid_argument("layout: nsub_per_side must be positive");
  }
  if (n % nsub_per_side != 0) {
    throw std::invalid_argument(
        "layout: nsub_per_side = " + std::to_string(nsub_per_side) +
        " does not divide pressure cells_per_side = " + std::to_string(n));
  }
  SubdomainLayout layout;
  layout.nsub_per_side = nsub_per_side;
  layout.cells_per_sub = n / nsub_per_side;
  layout.H = 1.0 / nsub_per_side;
  return layout;
}

void dump_mesh(const StructuredMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("mesh dump: cannot open " + path);
  }
  out.precision(17);
  out << mesh.node_count() << " " << mesh.triangle_count() << "\n";
  for (const auto& nd : mesh.nodes) {
    out << nd[0] << " " << nd[1] << "\n";
  }
  for (const auto& t : mesh.triangles) {
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
}

} // namespace stokesdd
