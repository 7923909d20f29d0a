// The factored interface system: inverse contract of the leading-block solve,
// coarse Schur complement against a dense oracle, symmetry/semi-definiteness
// of the reduced operator, the lumped preconditioner, null-space hygiene, and
// the mass-norm bound on the interface-pressure block.

#include <doctest.h>

#include "test_helpers.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace stokesdd;
using stokesdd::testing::make_case;
using stokesdd::testing::random_vec;
using stokesdd::testing::random_zero_mean_vec;

TEST_SUITE("reduced") {

// ============================================================================
// Leading-block solve and coarse Schur complement
// ============================================================================

TEST_CASE("atilde_solve inverts the leading four-block operator") {
  std::mt19937 rng(41);
  for (CoarseSpace coarse : {CoarseSpace::CornersOnly, CoarseSpace::CornersEdges}) {
    for (PressureKind pk : {PressureKind::Continuous, PressureKind::Discontinuous}) {
      auto cs = make_case(2, 4, coarse, pk);
      WtVec f;
      f.r = random_vec(cs->blocks.n_r_total, rng);
      f.pi = random_vec(cs->blocks.n_primal, rng);
      const WtVec w = cs->reduced->atilde_solve(f);

      // Reapply through the full split operator with zero interface blocks;
      // its r- and primal rows are exactly the leading operator.
      BigVec x = zero_big_vec(cs->blocks);
      x.r = w.r;
      x.pi = w.pi;
      const BigVec y = apply_big_operator(cs->blocks, cs->jumps, x);
      const double scale = std::sqrt(f.r.squaredNorm() + f.pi.squaredNorm());
      CHECK((y.r - f.r).norm() <= 1e-9 * scale);
      CHECK((y.pi - f.pi).norm() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("coarse matrix equals the dense Schur complement and is SPD") {
  auto cs = make_case(2, 4, CoarseSpace::CornersEdges, PressureKind::Continuous);
  const auto& blocks = cs->blocks;
  const int nr = blocks.n_r_total;
  const int npi = blocks.n_primal;

  // Dense leading blocks assembled from the per-subdomain pieces.
  Mat Arr = Mat::Zero(nr, nr);
  Mat ArP = Mat::Zero(nr, npi);
  Mat App = Mat::Zero(npi, npi);
  for (int s = 0; s < blocks.sub_count(); ++s) {
    const auto& lb = blocks.sub[s];
    const int off = blocks.r_offset[s];
    Arr.block(off, off, lb.n_r(), lb.n_r()) = Mat(lb.Arr);
    const Mat local_ArP = Mat(lb.ArP);
    const Mat local_App = Mat(lb.App);
    for (int k = 0; k < lb.n_primal_loc; ++k) {
      ArP.col(lb.primal_global[k]).segment(off, lb.n_r()) += local_ArP.col(k);
      for (int l = 0; l < lb.n_primal_loc; ++l) {
        App(lb.primal_global[k], lb.primal_global[l]) += local_App(k, l);
      }
    }
  }
  const Mat schur = App - ArP.transpose() * Arr.ldlt().solve(ArP);
  const Mat S = Mat(cs->reduced->coarse_matrix());
  REQUIRE(S.rows() == npi);
  CHECK((S - schur).cwiseAbs().maxCoeff() <= 1e-9 * schur.cwiseAbs().maxCoeff());
  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * S.cwiseAbs().maxCoeff());

  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // Corner-only variant: one interior vertex, both components.
  auto co = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous);
  CHECK(co->reduced->coarse_matrix().rows() == 2);
}

// ============================================================================
// Reduced operator
// ============================================================================

TEST_CASE("interface operator is symmetric, positive semi-definite, and kills the null vector") {
  std::mt19937 rng(43);
  for (PressureKind pk : {PressureKind::Continuous, PressureKind::Discontinuous}) {
    auto cs = make_case(2, 4, CoarseSpace::CornersOnly, pk);
    const auto& red = *cs->reduced;
    const int n = red.dim();
    REQUIRE(n == cs->blocks.n_pgamma + cs->blocks.n_lambda);

    for (int trial = 0; trial < 5; ++trial) {
      const Vec x = random_vec(n, rng);
      const Vec y = random_vec(n, rng);
      const Vec Gx = red.apply_G(x);
      const Vec Gy = red.apply_G(y);
      const double lhs = y.dot(Gx), rhs = x.dot(Gy);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + Gx.norm() * y.norm()));
      CHECK(x.dot(Gx) >= -1e-10 * x.squaredNorm());
    }

    const NullBasis nb = build_null_basis(cs->blocks, cs->jumps);
    const Vec Gnull = red.apply_G(nb.reduced);
    CHECK(Gnull.norm() <= 1e-10 * nb.norm);

    const Vec g = red.reduced_rhs();
    CHECK(std::abs(g.dot(nb.reduced)) <= 1e-10 * g.norm() * nb.norm);
  }
}

TEST_CASE("one operator application costs two local sweeps and one coarse solve") {
  std::mt19937 rng(47);
  auto cs = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous);
  const auto& red = *cs->reduced;
  red.reset_counters();
  (void)red.apply_G(random_vec(red.dim(), rng));
  CHECK(red.local_solve_sweeps() == 2);
  CHECK(red.coarse_solves() == 1);
  (void)red.apply_G(random_vec(red.dim(), rng));
  CHECK(red.local_solve_sweeps() == 4);
  CHECK(red.coarse_solves() == 2);
}

TEST_CASE("zero load gives a zero right-hand side") {
  const auto zero_force = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  auto cs = std::make_unique<stokesdd::testing::CaseSetup>();
  cs->meshes = build_mesh_pair(8);
  cs->layout = build_subdomain_layout(cs->meshes, 2);
  cs->system = build_mixed_system(cs->meshes, PressureKind::Continuous, zero_force);
  cs->partition =
      classify_dofs(cs->meshes, cs->layout, CoarseSpace::CornersOnly, PressureKind::Continuous);
  cs->jumps = build_jump_operators(cs->partition);
  cs->blocks = build_saddle_blocks(cs->meshes, cs->system, cs->partition);
  const ReducedSystem red(cs->blocks, cs->jumps);
  CHECK(red.reduced_rhs().norm() <= 1e-15);
}

// ============================================================================
// Lumped preconditioner
// ============================================================================

TEST_CASE("preconditioner is block-diagonal, symmetric, and positive definite") {
  std::mt19937 rng(53);
  for (PressureKind pk : {PressureKind::Continuous, PressureKind::Discontinuous}) {
    auto cs = make_case(2, 4, CoarseSpace::CornersOnly, pk);
    const auto& red = *cs->reduced;
    const int np = cs->blocks.n_pgamma;
    const int n = red.dim();

    // Pressure-only input: output is the same vector scaled, with no
    // multiplier leakage.
    Vec y = Vec::Zero(n);
    y.head(np) = random_vec(np, rng);
    const Vec My = red.apply_preconditioner(y);
    CHECK((My.head(np) - red.pressure_scale() * y.head(np)).cwiseAbs().maxCoeff() <=
          1e-13 * red.pressure_scale());
    CHECK(My.tail(n - np).cwiseAbs().maxCoeff() == 0.0);

    for (int trial = 0; trial < 5; ++trial) {
      const Vec a = random_vec(n, rng);
      const Vec b = random_vec(n, rng);
      const double lhs = b.dot(red.apply_preconditioner(a));
      const double rhs = a.dot(red.apply_preconditioner(b));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
    for (int trial = 0; trial < 100; ++trial) {
      const Vec a = random_vec(n, rng);
      CHECK(a.dot(red.apply_preconditioner(a)) > 0.0);
    }
  }
}

TEST_CASE("pressure block scale per element family") {
  auto cont = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous);
  const double h = cont->blocks.h;
  CHECK(cont->reduced->pressure_scale() == doctest::Approx(4.0 / (h * h)).epsilon(1e-14));

  auto disc = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Discontinuous);
  CHECK(disc->reduced->pressure_scale() == doctest::Approx(2.2 / (h * h)).epsilon(1e-14));
}

// ============================================================================
// Interface-pressure block: energy bound and h^2 scaling
// ============================================================================

TEST_CASE("quadratic form of the pressure block is bounded by the zero-extension mass norm") {
  std::mt19937 rng(59);
  auto cs = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous);
  const auto& red = *cs->reduced;
  const int np = cs->blocks.n_pgamma;
  const int n = red.dim();

  for (int trial = 0; trial < 100; ++trial) {
    const Vec pg = random_zero_mean_vec(np, rng);
    Vec x = Vec::Zero(n);
    x.head(np) = pg;
    const double energy = x.dot(red.apply_G(x));

    // Extension by zero to the full pressure space, measured in the Gram norm.
    Vec ext = Vec::Zero(cs->system.n_pressure);
    for (int k = 0; k < np; ++k) ext[cs->partition.pgamma_nodes[k]] = pg[k];
    const double mass_norm = ext.dot(cs->system.Z * ext);
    CHECK(energy <= (1.0 + 1e-8) * mass_norm);
  }
}

TEST_CASE("pressure-block eigenvalues scale like h^2 under refinement") {
  auto coarse = make_case(2, 2, CoarseSpace::CornersOnly, PressureKind::Continuous);
  auto fine = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous);

  auto extremes = [](const testing::CaseSetup& cs) {
    const Mat G = dense_reduced_matrix(*cs.reduced);
    const int np = cs.blocks.n_pgamma;
    const Mat Gpp = G.topLeftCorner(np, np);
    // Deflate the constant direction; the remaining spectrum is positive.
    const Mat P = Mat::Identity(np, np) - Mat::Ones(np, np) / np;
    Eigen::SelfAdjointEigenSolver<Mat> es(P * Gpp * P);
    const Vec ev = es.eigenvalues();
    return std::pair<double, double>(ev[1], ev[ev.size() - 1]);
  };

  const auto [min_c, max_c] = extremes(*coarse);
  const auto [min_f, max_f] = extremes(*fine);
  CHECK(min_c > 0.0);
  // Halving h should quarter the spectrum ends; accept a band around 1/4.
  CHECK(min_f / min_c >= 0.2);
  CHECK(min_f / min_c <= 0.3);
  CHECK(max_f / max_c >= 0.2);
  CHECK(max_f / max_c <= 0.3);
}

// ============================================================================
// Null-space hygiene and diagnostics
// ============================================================================

TEST_CASE("null projection: exact on the null vector, idempotent, invisible to the operator") {
  std::mt19937 rng(61);
  auto cs = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous);
  const NullBasis nb = build_null_basis(cs->blocks, cs->jumps);

  CHECK(project_out_null(nb.reduced, nb).norm() <= 1e-14 * nb.norm);

  const Vec x = random_vec(cs->reduced->dim(), rng);
  const Vec px = project_out_null(x, nb);
  CHECK((project_out_null(px, nb) - px).cwiseAbs().maxCoeff() <= 1e-14 * px.norm());
  CHECK(std::abs(px.dot(nb.reduced)) <= 1e-12 * px.norm() * nb.norm);

  const Vec Gx = cs->reduced->apply_G(x);
  const Vec Gpx = cs->reduced->apply_G(px);
  CHECK((Gx - Gpx).norm() <= 1e-10 * Gx.norm());
}

TEST_CASE("mesh size recovered from matrix entries halves under refinement") {
  auto coarse = make_case(2, 4, CoarseSpace::CornersOnly, PressureKind::Continuous, false);
  auto fine = make_case(2, 8, CoarseSpace::CornersOnly, PressureKind::Continuous, false);
  const double est_c = estimate_h_from_entries(coarse->system.A, coarse->system.B);
  const double est_f = estimate_h_from_entries(fine->system.A, fine->system.B);
  CHECK(est_c > 0.0);
  CHECK(est_c / est_f == doctest::Approx(2.0).epsilon(1e-10));
  // Same order of magnitude as the fine-mesh size it tracks.
  const double h_vel = coarse->meshes.velocity.h;
  CHECK(est_c >= 0.05 * h_vel);
  CHECK(est_c <= 5.0 * h_vel);
}

} // TEST_SUITE("reduced")
