#include "stokesdd/assembly.hpp"

#include "stokesdd/manufactured.hpp"

namespace stokesdd {

std::array<std::array<double, 2>, 3> p1_gradients(const StructuredMesh& mesh, int tri) {
  const auto& t = mesh.triangles[tri];
  const auto& a = mesh.nodes[t[0]];
  const auto& b = mesh.nodes[t[1]];
  const auto& c = mesh.nodes[t[2]];
  const double twice_area = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  return {{{(b[1] - c[1]) / twice_area, (c[0] - b[0]) / twice_area},
           {(c[1] - a[1]) / twice_area, (a[0] - c[0]) / twice_area},
           {(a[1] - b[1]) / twice_area, (b[0] - a[0]) / twice_area}}};
}

Eigen::Matrix3d p1_stiffness_local(const StructuredMesh& mesh, int tri) {
  const auto g = p1_gradients(mesh, tri);
  const double area = mesh.triangle_area(tri);
  Eigen::Matrix3d k;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k(i, j) = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
    }
  }
  return k;
}

Eigen::Matrix3d p1_mass_local(double area) {
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return (area / 12.0) * m;
}

std::array<double, 3> barycentric(const StructuredMesh& mesh, int tri, double x, double y) {
  const auto& t = mesh.triangles[tri];
  const auto& a = mesh.nodes[t[0]];
  const auto& b = mesh.nodes[t[1]];
  const auto& c = mesh.nodes[t[2]];
  const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  const double l1 = ((x - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (y - a[1])) / det;
  const double l2 = ((b[0] - a[0]) * (y - a[1]) - (x - a[0]) * (b[1] - a[1])) / det;
  return {1.0 - l1 - l2, l1, l2};
}

SpMat assemble_stiffness(const MeshPair& mesh_pair) {
  const StructuredMesh& vm = mesh_pair.velocity;
  const int nv = vm.node_count();
  std::vector<Triplet> trips;
  trips.reserve(vm.triangle_count() * 18);
  for (int tri = 0; tri < vm.triangle_count(); ++tri) {
    const Eigen::Matrix3d k = p1_stiffness_local(vm, tri);
    const auto& t = vm.triangles[tri];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int c = 0; c < 2; ++c) {
          trips.emplace_back(c * nv + t[i], c * nv + t[j], k(i, j));
        }
      }
    }
  }
  SpMat a(2 * nv, 2 * nv);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SpMat assemble_divergence(const MeshPair& mesh_pair, PressureKind kind) {
  const StructuredMesh& vm = mesh_pair.velocity;
  const StructuredMesh& pm = mesh_pair.pressure;
  const int nv = vm.node_count();
  const int np = kind == PressureKind::Continuous ? pm.node_count() : pm.triangle_count();
  std::vector<Triplet> trips;
  trips.reserve(vm.triangle_count() * 18);
  for (int tri = 0; tri < vm.triangle_count(); ++tri) {
    const auto g = p1_gradients(vm, tri);
    const double area = vm.triangle_area(tri);
    const auto& t = vm.triangles[tri];
    const int parent = mesh_pair.parent[tri];
    // b(u, q) = -int (div u) q; div of a nodal basis field is constant per
    // fine triangle, so the vertex average of q integrates exactly.
    if (kind == PressureKind::Continuous) {
      const auto& pt = pm.triangles[parent];
      std::array<double, 3> mean = {0.0, 0.0, 0.0};
      for (int v = 0; v < 3; ++v) {
        const auto lam =
            barycentric(pm, parent, vm.nodes[t[v]][0], vm.nodes[t[v]][1]);
        for (int q = 0; q < 3; ++q) mean[q] += lam[q] / 3.0;
      }
      for (int q = 0; q < 3; ++q) {
        for (int v = 0; v < 3; ++v) {
          for (int c = 0; c < 2; ++c) {
            trips.emplace_back(pt[q], c * nv + t[v], -g[v][c] * area * mean[q]);
          }
        }
      }
    } else {
      for (int v = 0; v < 3; ++v) {
        for (int c = 0; c < 2; ++c) {
          trips.emplace_back(parent, c * nv + t[v], -g[v][c] * area);
        }
      }
    }
  }
  SpMat b(np, 2 * nv);
  b.setFromTriplets(trips.begin(), trips.end());
  return b;
}

SpMat assemble_pressure_mass(const StructuredMesh& pressure_mesh) {
  std::vector<Triplet> trips;
  trips.reserve(pressure_mesh.triangle_count() * 9);
  for (int tri = 0; tri < pressure_mesh.triangle_count(); ++tri) {
    const Eigen::Matrix3d m = p1_mass_local(pressure_mesh.triangle_area(tri));
    const auto& t = pressure_mesh.triangles[tri];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        trips.emplace_back(t[i], t[j], m(i, j));
      }
    }
  }
  SpMat z(pressure_mesh.node_count(), pressure_mesh.node_count());
  z.setFromTriplets(trips.begin(), trips.end());
  return z;
}

SpMat assemble_pressure_gram(const MeshPair& mesh_pair, PressureKind kind) {
  if (kind == PressureKind::Continuous) {
    return assemble_pressure_mass(mesh_pair.pressure);
  }
  const StructuredMesh& pm = mesh_pair.pressure;
  SpMat z(pm.triangle_count(), pm.triangle_count());
  std::vector<Triplet> trips;
  trips.reserve(pm.triangle_count());
  for (int tri = 0; tri < pm.triangle_count(); ++tri) {
    trips.emplace_back(tri, tri, pm.triangle_area(tri));
  }
  z.setFromTriplets(trips.begin(), trips.end());
  return z;
}

Vec assemble_load_with_rule(const MeshPair& mesh_pair, const VectorField& f,
                            const std::vector<TriQuadPoint>& rule) {
  const StructuredMesh& vm = mesh_pair.velocity;
  const int nv = vm.node_count();
  Vec load = Vec::Zero(2 * nv);
  for (int tri = 0; tri < vm.triangle_count(); ++tri) {
    const auto& t = vm.triangles[tri];
    const double area = vm.triangle_area(tri);
    for (const auto& qp : rule) {
      const double x = qp.l0 * vm.nodes[t[0]][0] + qp.l1 * vm.nodes[t[1]][0] +
                       qp.l2 * vm.nodes[t[2]][0];
      const double y = qp.l0 * vm.nodes[t[0]][1] + qp.l1 * vm.nodes[t[1]][1] +
                       qp.l2 * vm.nodes[t[2]][1];
      const auto fv = f(x, y);
      const double lam[3] = {qp.l0, qp.l1, qp.l2};
      for (int v = 0; v < 3; ++v) {
        for (int c = 0; c < 2; ++c) {
          load[c * nv + t[v]] += qp.w * area * fv[c] * lam[v];
        }
      }
    }
  }
  return load;
}

Vec assemble_load(const MeshPair& mesh_pair, const VectorField& f) {
  return assemble_load_with_rule(mesh_pair, f, tri_quadrature_degree4());
}

AssembledOperators assemble_full(const MeshPair& mesh_pair, PressureKind kind,
                                 const VectorField& f) {
  AssembledOperators ops;
  ops.A = assemble_stiffness(mesh_pair);
  ops.B = assemble_divergence(mesh_pair, kind);
  ops.Z = assemble_pressure_gram(mesh_pair, kind);
  ops.f = assemble_load(mesh_pair, f);
  return ops;
}

MixedSystem eliminate_dirichlet(const MeshPair& mesh_pair, const AssembledOperators& ops,
                                PressureKind kind) {
  const StructuredMesh& vm = mesh_pair.velocity;
  const int nv = vm.node_count();
  MixedSystem sys;
  sys.pressure_kind = kind;
  sys.n_vel_nodes = nv;
  sys.n_pressure = static_cast<int>(ops.B.rows());
  sys.node_to_free.assign(nv, -1);
  for (int node = 0; node < nv; ++node) {
    if (!vm.node_on_boundary(node)) {
      sys.node_to_free[node] = static_cast<int>(sys.free_to_node.size());
      sys.free_to_node.push_back(node);
    }
  }
  sys.n_free_vel_nodes = static_cast<int>(sys.free_to_node.size());
  const int nf = sys.free_dof_count();

  auto free_of_full = [&](Eigen::Index dof) -> int {
    const int comp = static_cast<int>(dof) / nv;
    const int node = static_cast<int>(dof) % nv;
    const int fn = sys.node_to_free[node];
    return fn < 0 ? -1 : sys.free_dof(comp, fn);
  };

  std::vector<Triplet> trips;
  trips.reserve(ops.A.nonZeros());
  for (int k = 0; k < ops.A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(ops.A, k); it; ++it) {
      const int r = free_of_full(it.row());
      const int c = free_of_full(it.col());
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  sys.A.resize(nf, nf);
  sys.A.setFromTriplets(trips.begin(), trips.end());

  trips.clear();
  trips.reserve(ops.B.nonZeros());
  for (int k = 0; k < ops.B.outerSize(); ++k) {
    for (SpMat::InnerIterator it(ops.B, k); it; ++it) {
      const int c = free_of_full(it.col());
      if (c >= 0) trips.emplace_back(static_cast<int>(it.row()), c, it.value());
    }
  }
  sys.B.resize(sys.n_pressure, nf);
  sys.B.setFromTriplets(trips.begin(), trips.end());

  sys.Z = ops.Z;
  sys.f.resize(nf);
  for (int fn = 0; fn < sys.n_free_vel_nodes; ++fn) {
    for (int c = 0; c < 2; ++c) {
      sys.f[sys.free_dof(c, fn)] = ops.f[c * nv + sys.free_to_node[fn]];
    }
  }
  return sys;
}

MixedSystem build_mixed_system(const MeshPair& mesh_pair, PressureKind kind,
                               const VectorField& f) {
  return eliminate_dirichlet(mesh_pair, assemble_full(mesh_pair, kind, f), kind);
}

MixedSystem build_mixed_system(const MeshPair& mesh_pair, PressureKind kind) {
  return build_mixed_system(mesh_pair, kind, [](double x, double y) {
    return manufactured::body_force(x, y);
  });
}

} // namespace stokesdd
