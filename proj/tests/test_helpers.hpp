#pragma once

// Shared fixtures for the unit suites: one-call construction of the full
// decomposition pipeline on a desk-scale case, plus deterministic random
// vectors. Everything returns by unique_ptr because ReducedSystem keeps
// references into the blocks it was built from.

#include "stokesdd/assembly.hpp"
#include "stokesdd/blocks.hpp"
#include "stokesdd/driver.hpp"
#include "stokesdd/mesh.hpp"
#include "stokesdd/oracle.hpp"
#include "stokesdd/partition.hpp"
#include "stokesdd/pcg.hpp"
#include "stokesdd/reduced.hpp"
#include "stokesdd/types.hpp"

#include <memory>
#include <random>

namespace stokesdd::testing {

struct CaseSetup {
  MeshPair meshes;
  SubdomainLayout layout;
  MixedSystem system;
  DofPartition partition;
  JumpOperators jumps;
  SaddleBlocks blocks;
  std::unique_ptr<ReducedSystem> reduced;
};

inline std::unique_ptr<CaseSetup> make_case(int nsub, int ratio,
                                            CoarseSpace coarse = CoarseSpace::CornersOnly,
                                            PressureKind pkind = PressureKind::Continuous,
                                            bool with_reduced = true) {
  auto cs = std::make_unique<CaseSetup>();
  cs->meshes = build_mesh_pair(nsub * ratio);
  cs->layout = build_subdomain_layout(cs->meshes, nsub);
  cs->system = build_mixed_system(cs->meshes, pkind);
  cs->partition = classify_dofs(cs->meshes, cs->layout, coarse, pkind);
  cs->jumps = build_jump_operators(cs->partition);
  cs->blocks = build_saddle_blocks(cs->meshes, cs->system, cs->partition);
  if (with_reduced) {
    cs->reduced = std::make_unique<ReducedSystem>(cs->blocks, cs->jumps);
  }
  return cs;
}

inline Vec random_vec(int n, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

// Zero-mean variant (plain arithmetic mean).
inline Vec random_zero_mean_vec(int n, std::mt19937& rng) {
  Vec v = random_vec(n, rng);
  v.array() -= v.mean();
  return v;
}

} // namespace stokesdd::testing
