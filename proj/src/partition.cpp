#include "stokesdd/partition.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace stokesdd {

namespace {

// Subdomain block indices along one axis whose closed range contains grid
// line i of a mesh with per_side cells.
void axis_spans(int i, int per_side, int nsub, int out[2], int* count) {
  const int r = per_side / nsub;
  if (i % r == 0) {
    const int k = i / r;
    *count = 0;
    if (k > 0) out[(*count)++] = k - 1;
    if (k < nsub) out[(*count)++] = k;
  } else {
    out[0] = i / r;
    *count = 1;
  }
}

} // namespace

DofPartition classify_dofs(const MeshPair& mesh_pair, const SubdomainLayout& layout,
                           CoarseSpace coarse, PressureKind pkind) {
  const int nsub = layout.nsub_per_side;
  if (nsub < 2) {
    throw std::invalid_argument(
        "partition: need at least 2 subdomains per side to form an interface");
  }
  if (layout.cells_per_sub < 2) {
    throw std::invalid_argument(
        "partition: H/h = " + std::to_string(layout.cells_per_sub) +
        " leaves a subdomain without interior pressure nodes; need H/h >= 2");
  }

  DofPartition part;
  part.coarse = coarse;
  part.pkind = pkind;
  part.layout = layout;

  const StructuredMesh& vm = mesh_pair.velocity;
  const StructuredMesh& pm = mesh_pair.pressure;
  const int nv = vm.cells_per_side;
  const int rv = nv / nsub;  // velocity cells per subdomain side
  part.n_vel_cells_per_side = nv;
  part.subs.resize(layout.count());

  // Interface edges: vertical sweep first, then horizontal, both ascending.
  for (int bi = 1; bi < nsub; ++bi) {
    for (int bj = 0; bj < nsub; ++bj) {
      InterfaceEdge e;
      e.axis = 0;
      e.sub_lo = layout.sub_id(bi - 1, bj);
      e.sub_hi = layout.sub_id(bi, bj);
      const int i = bi * rv;
      for (int j = bj * rv + 1; j < (bj + 1) * rv; ++j) {
        e.vnodes.push_back(vm.node_id(i, j));
      }
      part.edges.push_back(std::move(e));
    }
  }
  for (int bj = 1; bj < nsub; ++bj) {
    for (int bi = 0; bi < nsub; ++bi) {
      InterfaceEdge e;
      e.axis = 1;
      e.sub_lo = layout.sub_id(bi, bj - 1);
      e.sub_hi = layout.sub_id(bi, bj);
      const int j = bj * rv;
      for (int i = bi * rv + 1; i < (bi + 1) * rv; ++i) {
        e.vnodes.push_back(vm.node_id(i, j));
      }
      part.edges.push_back(std::move(e));
    }
  }

  // Interior cross points are primal corners.
  for (int j = rv; j < nv; j += rv) {
    for (int i = rv; i < nv; i += rv) {
      part.corner_nodes.push_back(vm.node_id(i, j));
    }
  }
  part.n_primal = 2 * static_cast<int>(part.corner_nodes.size());
  if (coarse == CoarseSpace::CornersEdges) {
    part.n_primal += static_cast<int>(part.edges.size());
  }

  // Velocity node ownership and multiplicity.
  part.vel_node_multiplicity.resize(vm.node_count());
  for (int j = 0; j <= nv; ++j) {
    for (int i = 0; i <= nv; ++i) {
      const int node = vm.node_id(i, j);
      part.vel_node_multiplicity[node] = layout.node_multiplicity(i, j, nv);
      if (vm.node_on_boundary(node)) continue;
      int si[2], sj[2], ci, cj;
      axis_spans(i, nv, nsub, si, &ci);
      axis_spans(j, nv, nsub, sj, &cj);
      if (ci == 1 && cj == 1) {
        part.subs[layout.sub_id(si[0], sj[0])].interior_nodes.push_back(node);
      } else if (ci == 2 && cj == 2) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            part.subs[layout.sub_id(si[a], sj[b])].corner_nodes.push_back(node);
          }
        }
      }
      // Multiplicity-2 nodes are edge interiors, attached through edge_refs.
    }
  }

  // Dual blocks per adjacent edge, in ascending edge order.
  for (int e = 0; e < static_cast<int>(part.edges.size()); ++e) {
    for (int s : {part.edges[e].sub_lo, part.edges[e].sub_hi}) {
      part.subs[s].edge_refs.push_back({e, part.subs[s].n_dual});
      part.subs[s].n_dual += part.edge_dual_size(e);
    }
  }
  part.n_dual_total = 0;
  for (auto& sd : part.subs) {
    sd.dual_offset = part.n_dual_total;
    part.n_dual_total += sd.n_dual;
  }

  part.edge_lambda_offset.resize(part.edges.size());
  part.n_lambda = 0;
  for (int e = 0; e < static_cast<int>(part.edges.size()); ++e) {
    part.edge_lambda_offset[e] = part.n_lambda;
    part.n_lambda += part.edge_dual_size(e);
  }

  // Global primal indices touched by each subdomain.
  for (int s = 0; s < layout.count(); ++s) {
    auto& sd = part.subs[s];
    for (int node : sd.corner_nodes) {
      const auto it = std::lower_bound(part.corner_nodes.begin(), part.corner_nodes.end(), node);
      const int k = static_cast<int>(it - part.corner_nodes.begin());
      sd.primal_global.push_back(part.primal_of_corner(k, 0));
      sd.primal_global.push_back(part.primal_of_corner(k, 1));
    }
    if (coarse == CoarseSpace::CornersEdges) {
      for (const auto& ref : sd.edge_refs) {
        sd.primal_global.push_back(part.primal_of_edge(ref.edge));
      }
    }
    std::sort(sd.primal_global.begin(), sd.primal_global.end());

    sd.nodal_nodes = sd.interior_nodes;
    for (const auto& ref : sd.edge_refs) {
      const auto& vn = part.edges[ref.edge].vnodes;
      sd.nodal_nodes.insert(sd.nodal_nodes.end(), vn.begin(), vn.end());
    }
    sd.nodal_nodes.insert(sd.nodal_nodes.end(), sd.corner_nodes.begin(), sd.corner_nodes.end());
    std::sort(sd.nodal_nodes.begin(), sd.nodal_nodes.end());
  }

  // Pressure classification.
  if (pkind == PressureKind::Continuous) {
    const int np = pm.cells_per_side;
    part.pressure_node_to_gamma.assign(pm.node_count(), -1);
    for (int j = 0; j <= np; ++j) {
      for (int i = 0; i <= np; ++i) {
        const int node = pm.node_id(i, j);
        int si[2], sj[2], ci, cj;
        axis_spans(i, np, nsub, si, &ci);
        axis_spans(j, np, nsub, sj, &cj);
        if (ci * cj > 1) {
          part.pressure_node_to_gamma[node] = static_cast<int>(part.pgamma_nodes.size());
          part.pgamma_nodes.push_back(node);
        } else {
          part.subs[layout.sub_id(si[0], sj[0])].p_interior.push_back(node);
        }
      }
    }
    part.n_pgamma = static_cast<int>(part.pgamma_nodes.size());
  } else {
    for (int tri = 0; tri < pm.triangle_count(); ++tri) {
      const int cell = tri / 2;
      const int ci = cell % pm.cells_per_side;
      const int cj = cell / pm.cells_per_side;
      part.subs[layout.sub_of_pressure_cell(ci, cj)].cells.push_back(tri);
    }
    part.n_pgamma = layout.count();
  }

  return part;
}

JumpOperators build_jump_operators(const DofPartition& part) {
  JumpOperators ops;
  ops.lambda_dim = part.n_lambda;
  std::vector<Triplet> tb, tbd;
  tb.reserve(2 * part.n_lambda);
  tbd.reserve(2 * part.n_lambda);
  for (int e = 0; e < static_cast<int>(part.edges.size()); ++e) {
    const auto& edge = part.edges[e];
    // Every node strictly inside an edge is shared by exactly two subdomains.
    const double scale = 0.5;
    int base_lo = -1, base_hi = -1;
    for (const auto& ref : part.subs[edge.sub_lo].edge_refs) {
      if (ref.edge == e) base_lo = part.subs[edge.sub_lo].dual_offset + ref.dual_base;
    }
    for (const auto& ref : part.subs[edge.sub_hi].edge_refs) {
      if (ref.edge == e) base_hi = part.subs[edge.sub_hi].dual_offset + ref.dual_base;
    }
    for (int c = 0; c < 2; ++c) {
      const int cb = part.dual_comp_base(e, c);
      for (int k = 0; k < part.dual_per_comp(e, c); ++k) {
        const int row = part.edge_lambda_offset[e] + cb + k;
        tb.emplace_back(row, base_lo + cb + k, 1.0);
        tb.emplace_back(row, base_hi + cb + k, -1.0);
        tbd.emplace_back(row, base_lo + cb + k, scale);
        tbd.emplace_back(row, base_hi + cb + k, -scale);
      }
    }
  }
  ops.B_delta.resize(part.n_lambda, part.n_dual_total);
  ops.B_delta.setFromTriplets(tb.begin(), tb.end());
  ops.B_delta_d.resize(part.n_lambda, part.n_dual_total);
  ops.B_delta_d.setFromTriplets(tbd.begin(), tbd.end());
  return ops;
}

std::string partition_stats_json(const DofPartition& part) {
  nlohmann::json j;
  j["coarse"] = to_string(part.coarse);
  j["pressure"] = to_string(part.pkind);
  j["nsub_per_side"] = part.layout.nsub_per_side;
  j["n_primal"] = part.n_primal;
  j["n_dual_total"] = part.n_dual_total;
  j["n_lambda"] = part.n_lambda;
  j["n_pgamma"] = part.n_pgamma;
  j["n_edges"] = part.edges.size();
  j["n_corners"] = part.corner_nodes.size();
  nlohmann::json subs = nlohmann::json::array();
  for (int s = 0; s < static_cast<int>(part.subs.size()); ++s) {
    const auto& sd = part.subs[s];
    subs.push_back({{"subdomain", s},
                    {"u_interior", 2 * sd.interior_nodes.size()},
                    {"u_dual", sd.n_dual},
                    {"u_primal", sd.primal_global.size()},
                    {"p_interior", part.n_pI(s)},
                    {"edges", sd.edge_refs.size()}});
  }
  j["subdomains"] = std::move(subs);
  return j.dump(2);
}

} // namespace stokesdd
