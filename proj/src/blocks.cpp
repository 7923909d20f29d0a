#include "stokesdd/blocks.hpp"

#include "stokesdd/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stokesdd {

namespace {

int sorted_pos(const std::vector<int>& v, int value) {
  const auto it = std::lower_bound(v.begin(), v.end(), value);
  return static_cast<int>(it - v.begin());
}

// Interior pressure basis for a subdomain with m cells: the indicator of
// every cell except the one at index k0. Together with the subdomain
// constant this spans all cell values; the constant carries the dropped
// cell's value and the interior coordinates are offsets against it.
SpMat drop_cell_basis(int m, int k0) {
  std::vector<Triplet> trips;
  for (int k = 0; k < m; ++k) {
    if (k == k0) continue;
    trips.emplace_back(k, k - (k > k0 ? 1 : 0), 1.0);
  }
  SpMat t(m, std::max(m - 1, 0));
  t.setFromTriplets(trips.begin(), trips.end());
  return t;
}

struct LocalNodal {
  std::vector<int> tris;       // velocity triangles of the subdomain
  int nloc = 0;                // local free velocity nodes
  SpMat A;                     // 2 nloc square
  Vec f;                       // one-sided load
  SpMat B_rows;                // local pressure rows x 2 nloc
  int n_interior_rows = 0;     // continuous: interior-node rows leading B_rows
  std::vector<int> gamma_loc;  // continuous: coarse node ids of trailing rows
};

LocalNodal assemble_local(const MeshPair& mesh_pair, const DofPartition& part, int s) {
  const StructuredMesh& vm = mesh_pair.velocity;
  const StructuredMesh& pm = mesh_pair.pressure;
  const SubdomainDofs& sd = part.subs[s];
  const int nsub = part.layout.nsub_per_side;
  const int nv = vm.cells_per_side;
  const int rv = nv / nsub;
  const int bi = s % nsub;
  const int bj = s / nsub;

  LocalNodal loc;
  loc.nloc = static_cast<int>(sd.nodal_nodes.size());
  loc.tris.reserve(2 * rv * rv);
  for (int cj = bj * rv; cj < (bj + 1) * rv; ++cj) {
    for (int ci = bi * rv; ci < (bi + 1) * rv; ++ci) {
      const int cell = cj * nv + ci;
      loc.tris.push_back(2 * cell);
      loc.tris.push_back(2 * cell + 1);
    }
  }

  auto pos = [&sd](int node) { return sorted_pos(sd.nodal_nodes, node); };
  auto is_free = [&vm](int node) { return !vm.node_on_boundary(node); };

  std::vector<Triplet> ta;
  ta.reserve(loc.tris.size() * 18);
  loc.f = Vec::Zero(2 * loc.nloc);
  const auto& rule = tri_quadrature_degree4();
  for (int tri : loc.tris) {
    const Eigen::Matrix3d k = p1_stiffness_local(vm, tri);
    const auto& t = vm.triangles[tri];
    for (int i = 0; i < 3; ++i) {
      if (!is_free(t[i])) continue;
      const int pi_ = pos(t[i]);
      for (int j = 0; j < 3; ++j) {
        if (!is_free(t[j])) continue;
        const int pj = pos(t[j]);
        for (int c = 0; c < 2; ++c) {
          ta.emplace_back(c * loc.nloc + pi_, c * loc.nloc + pj, k(i, j));
        }
      }
    }
    const double area = vm.triangle_area(tri);
    for (const auto& qp : rule) {
      const double x = qp.l0 * vm.nodes[t[0]][0] + qp.l1 * vm.nodes[t[1]][0] +
                       qp.l2 * vm.nodes[t[2]][0];
      const double y = qp.l0 * vm.nodes[t[0]][1] + qp.l1 * vm.nodes[t[1]][1] +
                       qp.l2 * vm.nodes[t[2]][1];
      const auto fv = manufactured::body_force(x, y);
      const double lam[3] = {qp.l0, qp.l1, qp.l2};
      for (int v = 0; v < 3; ++v) {
        if (!is_free(t[v])) continue;
        for (int c = 0; c < 2; ++c) {
          loc.f[c * loc.nloc + pos(t[v])] += qp.w * area * fv[c] * lam[v];
        }
      }
    }
  }
  loc.A.resize(2 * loc.nloc, 2 * loc.nloc);
  loc.A.setFromTriplets(ta.begin(), ta.end());

  // Local pressure rows.
  std::vector<Triplet> tb;
  tb.reserve(loc.tris.size() * 18);
  int n_prows = 0;
  if (part.pkind == PressureKind::Continuous) {
    const int rp = pm.cells_per_side / nsub;
    for (int j = bj * rp; j <= (bj + 1) * rp; ++j) {
      for (int i = bi * rp; i <= (bi + 1) * rp; ++i) {
        const int node = pm.node_id(i, j);
        if (part.pressure_node_to_gamma[node] >= 0) loc.gamma_loc.push_back(node);
      }
    }
    loc.n_interior_rows = static_cast<int>(sd.p_interior.size());
    n_prows = loc.n_interior_rows + static_cast<int>(loc.gamma_loc.size());
    auto prow = [&](int node) {
      const int g = part.pressure_node_to_gamma[node];
      if (g >= 0) return loc.n_interior_rows + sorted_pos(loc.gamma_loc, node);
      return sorted_pos(sd.p_interior, node);
    };
    for (int tri : loc.tris) {
      const auto g = p1_gradients(vm, tri);
      const double area = vm.triangle_area(tri);
      const auto& t = vm.triangles[tri];
      const int parent = mesh_pair.parent[tri];
      const auto& pt = pm.triangles[parent];
      std::array<double, 3> mean = {0.0, 0.0, 0.0};
      for (int v = 0; v < 3; ++v) {
        const auto lam = barycentric(pm, parent, vm.nodes[t[v]][0], vm.nodes[t[v]][1]);
        for (int q = 0; q < 3; ++q) mean[q] += lam[q] / 3.0;
      }
      for (int q = 0; q < 3; ++q) {
        const int row = prow(pt[q]);
        for (int v = 0; v < 3; ++v) {
          if (!is_free(t[v])) continue;
          for (int c = 0; c < 2; ++c) {
            tb.emplace_back(row, c * loc.nloc + pos(t[v]), -g[v][c] * area * mean[q]);
          }
        }
      }
    }
  } else {
    n_prows = static_cast<int>(sd.cells.size());
    loc.n_interior_rows = n_prows;  // pre-transform: one row per macro cell
    for (int tri : loc.tris) {
      const auto g = p1_gradients(vm, tri);
      const double area = vm.triangle_area(tri);
      const auto& t = vm.triangles[tri];
      const int row = sorted_pos(sd.cells, mesh_pair.parent[tri]);
      for (int v = 0; v < 3; ++v) {
        if (!is_free(t[v])) continue;
        for (int c = 0; c < 2; ++c) {
          tb.emplace_back(row, c * loc.nloc + pos(t[v]), -g[v][c] * area);
        }
      }
    }
  }
  loc.B_rows.resize(n_prows, 2 * loc.nloc);
  loc.B_rows.setFromTriplets(tb.begin(), tb.end());
  return loc;
}

void build_transforms(const DofPartition& part, int s, int nloc, LocalBlocks& lb) {
  const SubdomainDofs& sd = part.subs[s];
  auto pos = [&sd](int node) { return sorted_pos(sd.nodal_nodes, node); };

  const int n_int = static_cast<int>(sd.interior_nodes.size());
  std::vector<Triplet> ti, td, tp;
  for (int k = 0; k < n_int; ++k) {
    for (int c = 0; c < 2; ++c) {
      ti.emplace_back(c * nloc + pos(sd.interior_nodes[k]), c * n_int + k, 1.0);
    }
  }
  for (const auto& ref : sd.edge_refs) {
    const auto& vn = part.edges[ref.edge].vnodes;
    const int m = static_cast<int>(vn.size());
    for (int c = 0; c < 2; ++c) {
      const int md = part.dual_per_comp(ref.edge, c);
      for (int k = 0; k < md; ++k) {
        const int col = ref.dual_base + part.dual_comp_base(ref.edge, c) + k;
        if (md == m) {
          td.emplace_back(c * nloc + pos(vn[k]), col, 1.0);
        } else {
          // Average-constrained component: difference with the edge's last
          // node, e_k - e_{m-1}. In this basis a jump of the k-th dual
          // coordinate equals the nodal jump at node k, so the multiplier
          // rows keep their nodal meaning; the removed direction is carried
          // by the shared edge average.
          td.emplace_back(c * nloc + pos(vn[k]), col, 1.0);
          td.emplace_back(c * nloc + pos(vn[m - 1]), col, -1.0);
        }
      }
    }
  }
  for (int col = 0; col < static_cast<int>(sd.primal_global.size()); ++col) {
    const int id = sd.primal_global[col];
    if (id < part.n_corner_primal()) {
      const int node = part.corner_nodes[id / 2];
      tp.emplace_back((id % 2) * nloc + pos(node), col, 1.0);
    } else {
      const int e = id - part.n_corner_primal();
      const int c = part.edges[e].axis;  // normal component of the edge
      for (int node : part.edges[e].vnodes) {
        tp.emplace_back(c * nloc + pos(node), col, 1.0);
      }
    }
  }
  lb.T_I.resize(2 * nloc, 2 * n_int);
  lb.T_I.setFromTriplets(ti.begin(), ti.end());
  lb.T_D.resize(2 * nloc, sd.n_dual);
  lb.T_D.setFromTriplets(td.begin(), td.end());
  lb.T_P.resize(2 * nloc, sd.primal_global.size());
  lb.T_P.setFromTriplets(tp.begin(), tp.end());
}

void append_block(std::vector<Triplet>& trips, const SpMat& m, int row0, int col0,
                  bool transpose = false) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      if (transpose) {
        trips.emplace_back(row0 + static_cast<int>(it.col()),
                           col0 + static_cast<int>(it.row()), it.value());
      } else {
        trips.emplace_back(row0 + static_cast<int>(it.row()),
                           col0 + static_cast<int>(it.col()), it.value());
      }
    }
  }
}

} // namespace

SaddleBlocks build_saddle_blocks(const MeshPair& mesh_pair, const MixedSystem& system,
                                 const DofPartition& partition, int threads) {
  if (system.n_vel_nodes != mesh_pair.velocity.node_count()) {
    throw std::invalid_argument("blocks: system and mesh velocity dimensions differ");
  }
  if (system.pressure_kind != partition.pkind) {
    throw std::invalid_argument("blocks: system and partition pressure kinds differ");
  }
  const int expected_np = partition.pkind == PressureKind::Continuous
                              ? mesh_pair.pressure.node_count()
                              : mesh_pair.pressure.triangle_count();
  if (system.n_pressure != expected_np) {
    throw std::invalid_argument("blocks: pressure dimension mismatch");
  }

  SaddleBlocks blocks;
  blocks.coarse = partition.coarse;
  blocks.pkind = partition.pkind;
  blocks.h = mesh_pair.h();
  blocks.H = partition.layout.H;
  blocks.n_primal = partition.n_primal;
  blocks.n_pgamma = partition.n_pgamma;
  blocks.n_dual_total = partition.n_dual_total;
  blocks.n_lambda = partition.n_lambda;
  const int nsub = partition.layout.count();
  blocks.sub.resize(nsub);
  blocks.f_pi = Vec::Zero(partition.n_primal);

  std::vector<Vec> f_pi_parts(nsub);
  parallel_for(nsub, threads, [&](int s) {
    const SubdomainDofs& sd = partition.subs[s];
    LocalNodal loc = assemble_local(mesh_pair, partition, s);
    LocalBlocks& lb = blocks.sub[s];
    lb.n_uI = partition.n_uI(s);
    lb.n_pI = partition.n_pI(s);
    lb.n_dual = sd.n_dual;
    lb.n_primal_loc = static_cast<int>(sd.primal_global.size());
    lb.primal_global = sd.primal_global;
    build_transforms(partition, s, loc.nloc, lb);

    SpMat B_int, B_gam;
    if (partition.pkind == PressureKind::Continuous) {
      B_int = loc.B_rows.topRows(loc.n_interior_rows);
      B_gam = loc.B_rows.bottomRows(loc.B_rows.rows() - loc.n_interior_rows);
      lb.pgamma_local.reserve(loc.gamma_loc.size());
      for (int node : loc.gamma_loc) {
        lb.pgamma_local.push_back(partition.pressure_node_to_gamma[node]);
      }
    } else {
      const int m = static_cast<int>(sd.cells.size());
      lb.dropped_cell = m - 1;
      lb.Tq_dev = drop_cell_basis(m, lb.dropped_cell);
      B_int = SpMat(lb.Tq_dev.transpose()) * loc.B_rows;
      SpMat ones(m, 1);
      {
        std::vector<Triplet> t1;
        for (int i = 0; i < m; ++i) t1.emplace_back(i, 0, 1.0);
        ones.setFromTriplets(t1.begin(), t1.end());
      }
      B_gam = SpMat(ones.transpose()) * loc.B_rows;
      lb.pgamma_local = {s};
    }
    lb.n_pgamma_loc = static_cast<int>(lb.pgamma_local.size());

    const SpMat A_TI = loc.A * lb.T_I;
    const SpMat A_TD = loc.A * lb.T_D;
    const SpMat A_TP = loc.A * lb.T_P;
    const SpMat A_II = SpMat(lb.T_I.transpose()) * A_TI;
    const SpMat A_ID = SpMat(lb.T_I.transpose()) * A_TD;
    const SpMat A_IP = SpMat(lb.T_I.transpose()) * A_TP;
    lb.A_dd = SpMat(lb.T_D.transpose()) * A_TD;
    const SpMat A_DP = SpMat(lb.T_D.transpose()) * A_TP;
    lb.App = SpMat(lb.T_P.transpose()) * A_TP;
    const SpMat B_II = B_int * lb.T_I;
    const SpMat B_ID = B_int * lb.T_D;
    const SpMat B_IP = B_int * lb.T_P;
    lb.Bg_I = B_gam * lb.T_I;
    lb.Bg_D = B_gam * lb.T_D;
    lb.Bg_P = B_gam * lb.T_P;

    const int nr = lb.n_r();
    std::vector<Triplet> tr;
    tr.reserve(2 * (A_II.nonZeros() + A_ID.nonZeros() + lb.A_dd.nonZeros() +
                    B_II.nonZeros() + B_ID.nonZeros()));
    append_block(tr, A_II, lb.uI_base(), lb.uI_base());
    append_block(tr, A_ID, lb.uI_base(), lb.dual_base());
    append_block(tr, A_ID, lb.dual_base(), lb.uI_base(), /*transpose=*/true);
    append_block(tr, lb.A_dd, lb.dual_base(), lb.dual_base());
    append_block(tr, B_II, lb.pI_base(), lb.uI_base());
    append_block(tr, B_II, lb.uI_base(), lb.pI_base(), /*transpose=*/true);
    append_block(tr, B_ID, lb.pI_base(), lb.dual_base());
    append_block(tr, B_ID, lb.dual_base(), lb.pI_base(), /*transpose=*/true);
    lb.Arr.resize(nr, nr);
    lb.Arr.setFromTriplets(tr.begin(), tr.end());

    tr.clear();
    append_block(tr, A_IP, lb.uI_base(), 0);
    append_block(tr, B_IP, lb.pI_base(), 0);
    append_block(tr, A_DP, lb.dual_base(), 0);
    lb.ArP.resize(nr, lb.n_primal_loc);
    lb.ArP.setFromTriplets(tr.begin(), tr.end());

    lb.f_r = Vec::Zero(nr);
    lb.f_r.segment(lb.uI_base(), lb.n_uI) = SpMat(lb.T_I.transpose()) * loc.f;
    lb.f_r.segment(lb.dual_base(), lb.n_dual) = SpMat(lb.T_D.transpose()) * loc.f;
    f_pi_parts[s] = SpMat(lb.T_P.transpose()) * loc.f;
  });

  for (int s = 0; s < nsub; ++s) {
    const auto& lb = blocks.sub[s];
    for (int k = 0; k < lb.n_primal_loc; ++k) {
      blocks.f_pi[lb.primal_global[k]] += f_pi_parts[s][k];
    }
  }
  blocks.r_offset.resize(nsub + 1, 0);
  for (int s = 0; s < nsub; ++s) {
    blocks.r_offset[s + 1] = blocks.r_offset[s] + blocks.sub[s].n_r();
  }
  blocks.n_r_total = blocks.r_offset[nsub];
  return blocks;
}

BigVec zero_big_vec(const SaddleBlocks& blocks) {
  BigVec v;
  v.r = Vec::Zero(blocks.n_r_total);
  v.pi = Vec::Zero(blocks.n_primal);
  v.pgamma = Vec::Zero(blocks.n_pgamma);
  v.lambda = Vec::Zero(blocks.n_lambda);
  return v;
}

Vec gather_dual(const SaddleBlocks& blocks, const Vec& r) {
  Vec dual = Vec::Zero(blocks.n_dual_total);
  int off = 0;
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    dual.segment(off, lb.n_dual) = r.segment(blocks.r_offset[s] + lb.dual_base(), lb.n_dual);
    off += lb.n_dual;
  }
  return dual;
}

void scatter_dual_add(const SaddleBlocks& blocks, const Vec& dual, Vec& r) {
  int off = 0;
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    r.segment(blocks.r_offset[s] + lb.dual_base(), lb.n_dual) += dual.segment(off, lb.n_dual);
    off += lb.n_dual;
  }
}

BigVec apply_big_operator(const SaddleBlocks& blocks, const JumpOperators& jumps,
                          const BigVec& x) {
  BigVec out = zero_big_vec(blocks);
  const Vec bdual = jumps.B_delta.transpose() * x.lambda;
  int dual_off = 0;
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    const int off = blocks.r_offset[s];
    Vec pi_loc(lb.n_primal_loc), pg_loc(lb.n_pgamma_loc);
    for (int k = 0; k < lb.n_primal_loc; ++k) pi_loc[k] = x.pi[lb.primal_global[k]];
    for (int k = 0; k < lb.n_pgamma_loc; ++k) pg_loc[k] = x.pgamma[lb.pgamma_local[k]];
    const Vec r_s = x.r.segment(off, lb.n_r());
    Vec y = lb.Arr * r_s + lb.ArP * pi_loc;
    y.segment(lb.uI_base(), lb.n_uI) += lb.Bg_I.transpose() * pg_loc;
    y.segment(lb.dual_base(), lb.n_dual) += lb.Bg_D.transpose() * pg_loc;
    y.segment(lb.dual_base(), lb.n_dual) += bdual.segment(dual_off, lb.n_dual);
    out.r.segment(off, lb.n_r()) = y;

    const Vec pi_out = lb.ArP.transpose() * r_s + lb.App * pi_loc + lb.Bg_P.transpose() * pg_loc;
    for (int k = 0; k < lb.n_primal_loc; ++k) out.pi[lb.primal_global[k]] += pi_out[k];

    const Vec pg_out = lb.Bg_I * r_s.segment(lb.uI_base(), lb.n_uI) +
                       lb.Bg_D * r_s.segment(lb.dual_base(), lb.n_dual) + lb.Bg_P * pi_loc;
    for (int k = 0; k < lb.n_pgamma_loc; ++k) out.pgamma[lb.pgamma_local[k]] += pg_out[k];
    dual_off += lb.n_dual;
  }
  out.lambda = jumps.B_delta * gather_dual(blocks, x.r);
  return out;
}

void pressure_constant_coords(const SaddleBlocks& blocks, Vec& r_pressure_part, Vec& pgamma) {
  r_pressure_part = Vec::Zero(blocks.n_r_total);
  if (blocks.pkind == PressureKind::Continuous) {
    for (int s = 0; s < blocks.sub_count(); ++s) {
      const auto& lb = blocks.sub[s];
      r_pressure_part.segment(blocks.r_offset[s] + lb.pI_base(), lb.n_pI).setOnes();
    }
  }
  pgamma = Vec::Ones(blocks.n_pgamma);
}

NullBasis build_null_basis(const SaddleBlocks& blocks, const JumpOperators& jumps) {
  NullBasis nb;
  nb.full = zero_big_vec(blocks);
  Vec pconst_r;
  pressure_constant_coords(blocks, pconst_r, nb.full.pgamma);
  nb.full.r = pconst_r;

  // One-sided flux functionals of the dual basis under constant pressure.
  Vec t = Vec::Zero(blocks.n_dual_total);
  int off = 0;
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    const SpMat B_ID = lb.Arr.block(lb.pI_base(), lb.dual_base(), lb.n_pI, lb.n_dual);
    Vec ts = Vec::Zero(lb.n_dual);
    if (blocks.pkind == PressureKind::Continuous) {
      ts += B_ID.transpose() * Vec::Ones(lb.n_pI);
    }
    Vec pg_loc(lb.n_pgamma_loc);
    for (int k = 0; k < lb.n_pgamma_loc; ++k) pg_loc[k] = nb.full.pgamma[lb.pgamma_local[k]];
    ts += lb.Bg_D.transpose() * pg_loc;
    t.segment(off, lb.n_dual) = ts;
    off += lb.n_dual;
  }
  nb.full.lambda = -(jumps.B_delta_d * t);
  nb.reduced = Vec(blocks.n_pgamma + blocks.n_lambda);
  nb.reduced.head(blocks.n_pgamma) = nb.full.pgamma;
  nb.reduced.tail(blocks.n_lambda) = nb.full.lambda;
  nb.norm = nb.reduced.norm();
  return nb;
}

Vec expand_velocity(const SaddleBlocks& blocks, const DofPartition& partition,
                    const MixedSystem& system, const BigVec& x) {
  Vec u = Vec::Zero(system.free_dof_count());
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    const auto& sd = partition.subs[s];
    const int off = blocks.r_offset[s];
    Vec pi_loc(lb.n_primal_loc);
    for (int k = 0; k < lb.n_primal_loc; ++k) pi_loc[k] = x.pi[lb.primal_global[k]];
    const Vec nodal = lb.T_I * x.r.segment(off + lb.uI_base(), lb.n_uI) +
                      lb.T_D * x.r.segment(off + lb.dual_base(), lb.n_dual) +
                      lb.T_P * pi_loc;
    const int nloc = static_cast<int>(sd.nodal_nodes.size());
    for (int k = 0; k < nloc; ++k) {
      const int node = sd.nodal_nodes[k];
      const int fn = system.node_to_free[node];
      const double w = 1.0 / partition.vel_node_multiplicity[node];
      for (int c = 0; c < 2; ++c) {
        u[system.free_dof(c, fn)] += w * nodal[c * nloc + k];
      }
    }
  }
  return u;
}

Vec expand_pressure(const SaddleBlocks& blocks, const DofPartition& partition,
                    const MixedSystem& system, const BigVec& x) {
  Vec p = Vec::Zero(system.n_pressure);
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    const auto& sd = partition.subs[s];
    const int off = blocks.r_offset[s];
    const Vec pI = x.r.segment(off + lb.pI_base(), lb.n_pI);
    if (blocks.pkind == PressureKind::Continuous) {
      for (int k = 0; k < lb.n_pI; ++k) p[sd.p_interior[k]] = pI[k];
    } else {
      const Vec cells = lb.Tq_dev * pI + Vec::Ones(sd.cells.size()) * x.pgamma[s];
      for (int k = 0; k < static_cast<int>(sd.cells.size()); ++k) p[sd.cells[k]] = cells[k];
    }
  }
  if (blocks.pkind == PressureKind::Continuous) {
    for (int g = 0; g < partition.n_pgamma; ++g) {
      p[partition.pgamma_nodes[g]] = x.pgamma[g];
    }
  }
  return p;
}

BigVec restrict_solution(const SaddleBlocks& blocks, const DofPartition& partition,
                         const MixedSystem& system, const Vec& u_free, const Vec& p) {
  BigVec x = zero_big_vec(blocks);
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    const auto& sd = partition.subs[s];
    const int off = blocks.r_offset[s];
    const int nloc = static_cast<int>(sd.nodal_nodes.size());
    Vec nodal(2 * nloc);
    for (int k = 0; k < nloc; ++k) {
      const int fn = system.node_to_free[sd.nodal_nodes[k]];
      for (int c = 0; c < 2; ++c) nodal[c * nloc + k] = u_free[system.free_dof(c, fn)];
    }
    // Interior values copy over; per edge, split into (deviations, average)
    // or plain nodal copies; corners and averages land in the primal slots.
    const int n_int = static_cast<int>(sd.interior_nodes.size());
    auto pos = [&sd](int node) { return sorted_pos(sd.nodal_nodes, node); };
    for (int k = 0; k < n_int; ++k) {
      for (int c = 0; c < 2; ++c) {
        x.r[off + lb.uI_base() + c * n_int + k] = nodal[c * nloc + pos(sd.interior_nodes[k])];
      }
    }
    for (const auto& ref : sd.edge_refs) {
      const auto& vn = partition.edges[ref.edge].vnodes;
      const int m = static_cast<int>(vn.size());
      for (int c = 0; c < 2; ++c) {
        const int md = partition.dual_per_comp(ref.edge, c);
        const int base = off + lb.dual_base() + ref.dual_base + partition.dual_comp_base(ref.edge, c);
        if (md == m) {
          for (int k = 0; k < md; ++k) {
            x.r[base + k] = nodal[c * nloc + pos(vn[k])];
          }
        } else {
          double mean = 0.0;
          for (int i = 0; i < m; ++i) mean += nodal[c * nloc + pos(vn[i])] / m;
          for (int k = 0; k < md; ++k) {
            x.r[base + k] = nodal[c * nloc + pos(vn[k])] - mean;
          }
          x.pi[partition.primal_of_edge(ref.edge)] = mean;
        }
      }
    }
    for (int node : sd.corner_nodes) {
      const int k = sorted_pos(partition.corner_nodes, node);
      for (int c = 0; c < 2; ++c) {
        x.pi[partition.primal_of_corner(k, c)] = nodal[c * nloc + pos(node)];
      }
    }
    if (blocks.pkind == PressureKind::Continuous) {
      for (int k = 0; k < lb.n_pI; ++k) {
        x.r[off + lb.pI_base() + k] = p[sd.p_interior[k]];
      }
    } else {
      const int m = static_cast<int>(sd.cells.size());
      Vec cells(m);
      for (int k = 0; k < m; ++k) cells[k] = p[sd.cells[k]];
      x.pgamma[s] = cells[lb.dropped_cell];
      x.r.segment(off + lb.pI_base(), lb.n_pI) =
          lb.Tq_dev.transpose() * (cells - Vec::Ones(m) * cells[lb.dropped_cell]);
    }
  }
  if (blocks.pkind == PressureKind::Continuous) {
    for (int g = 0; g < partition.n_pgamma; ++g) {
      x.pgamma[g] = p[partition.pgamma_nodes[g]];
    }
  }
  return x;
}

ReassembledGlobal reassemble_global(const MeshPair& mesh_pair, const MixedSystem& system,
                                    const DofPartition& partition) {
  ReassembledGlobal out;
  const int nf = system.free_dof_count();
  std::vector<Triplet> ta, tb;
  out.f = Vec::Zero(nf);
  for (int s = 0; s < partition.layout.count(); ++s) {
    const auto& sd = partition.subs[s];
    LocalNodal loc = assemble_local(mesh_pair, partition, s);
    const int nloc = loc.nloc;
    auto gdof = [&](int c, int k) {
      return system.free_dof(c, system.node_to_free[sd.nodal_nodes[k]]);
    };
    for (int k = 0; k < loc.A.outerSize(); ++k) {
      for (SpMat::InnerIterator it(loc.A, k); it; ++it) {
        const int ci = static_cast<int>(it.row()) / nloc, ki = static_cast<int>(it.row()) % nloc;
        const int cj = static_cast<int>(it.col()) / nloc, kj = static_cast<int>(it.col()) % nloc;
        ta.emplace_back(gdof(ci, ki), gdof(cj, kj), it.value());
      }
    }
    std::vector<int> prow_global(loc.B_rows.rows());
    if (partition.pkind == PressureKind::Continuous) {
      for (int k = 0; k < loc.n_interior_rows; ++k) prow_global[k] = sd.p_interior[k];
      for (int k = 0; k < static_cast<int>(loc.gamma_loc.size()); ++k) {
        prow_global[loc.n_interior_rows + k] = loc.gamma_loc[k];
      }
    } else {
      for (int k = 0; k < static_cast<int>(sd.cells.size()); ++k) prow_global[k] = sd.cells[k];
    }
    for (int k = 0; k < loc.B_rows.outerSize(); ++k) {
      for (SpMat::InnerIterator it(loc.B_rows, k); it; ++it) {
        const int c = static_cast<int>(it.col()) / nloc, kn = static_cast<int>(it.col()) % nloc;
        tb.emplace_back(prow_global[it.row()], gdof(c, kn), it.value());
      }
    }
    for (int k = 0; k < nloc; ++k) {
      for (int c = 0; c < 2; ++c) out.f[gdof(c, k)] += loc.f[c * nloc + k];
    }
  }
  out.A.resize(nf, nf);
  out.A.setFromTriplets(ta.begin(), ta.end());
  out.B.resize(system.n_pressure, nf);
  out.B.setFromTriplets(tb.begin(), tb.end());
  return out;
}

} // namespace stokesdd
