// Element kernels, quadrature rules, and the assembled mixed operators:
// closed-form checks on the reference triangle, energy recomputation against
// an element loop, divergence-theorem identities, mass-matrix structure, and
// Dirichlet elimination.

#include <doctest.h>

#include "stokesdd/assembly.hpp"
#include "stokesdd/manufactured.hpp"
#include "stokesdd/mesh.hpp"
#include "stokesdd/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>

using namespace stokesdd;

namespace {

// Mesh holding just the unit reference triangle (0,0), (1,0), (0,1).
StructuredMesh reference_triangle() {
  StructuredMesh m;
  m.cells_per_side = 1;
  m.h = 1.0;
  m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.triangles = {{0, 1, 2}};
  return m;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Exact integral of l0^a l1^b l2^c over a triangle of unit area, where l_i
// are the barycentric coordinates: 2 a! b! c! / (a+b+c+2)!.
double barycentric_moment(int a, int b, int c) {
  return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

void check_rule_exact_to_degree(const std::vector<TriQuadPoint>& rule, int degree) {
  double wsum = 0.0;
  for (const auto& q : rule) wsum += q.w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      const int c = degree - a - b;
      double num = 0.0;
      for (const auto& q : rule) {
        num += q.w * std::pow(q.l0, a) * std::pow(q.l1, b) * std::pow(q.l2, c);
      }
      CHECK(num == doctest::Approx(barycentric_moment(a, b, c)).epsilon(1e-13));
    }
  }
}

} // namespace

TEST_SUITE("assembly") {

// ============================================================================
// Quadrature rules
// ============================================================================

TEST_CASE("triangle rules integrate barycentric monomials exactly up to their degree") {
  for (int d = 0; d <= 4; ++d) check_rule_exact_to_degree(tri_quadrature_degree4(), d);
  for (int d = 0; d <= 6; ++d) check_rule_exact_to_degree(tri_quadrature_degree6(), d);
}

// ============================================================================
// Element kernels on the reference triangle
// ============================================================================

TEST_CASE("closed-form P1 stiffness and mass") {
  const StructuredMesh ref = reference_triangle();
  const Eigen::Matrix3d K = p1_stiffness_local(ref, 0);
  Eigen::Matrix3d K_exact;
  K_exact << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  K_exact *= 0.5;
  CHECK((K - K_exact).cwiseAbs().maxCoeff() <= 1e-14);

  const double area = 0.5;
  const Eigen::Matrix3d M = p1_mass_local(area);
  Eigen::Matrix3d M_exact;
  M_exact << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  M_exact *= area / 12.0;
  CHECK((M - M_exact).cwiseAbs().maxCoeff() <= 1e-14);

  const auto grads = p1_gradients(ref, 0);
  CHECK(grads[0][0] == doctest::Approx(-1.0));
  CHECK(grads[0][1] == doctest::Approx(-1.0));
  CHECK(grads[1][0] == doctest::Approx(1.0));
  CHECK(grads[1][1] == doctest::Approx(0.0));
  CHECK(grads[2][0] == doctest::Approx(0.0));
  CHECK(grads[2][1] == doctest::Approx(1.0));
}

TEST_CASE("barycentric coordinates invert the vertex map") {
  const MeshPair mp = build_mesh_pair(3);
  const auto& m = mp.velocity;
  for (int t : {0, 5, m.triangle_count() - 1}) {
    // Vertices map to the unit coordinate vectors.
    for (int v = 0; v < 3; ++v) {
      const auto& xy = m.nodes[m.triangles[t][v]];
      const auto l = barycentric(m, t, xy[0], xy[1]);
      for (int k = 0; k < 3; ++k) {
        CHECK(l[k] == doctest::Approx(k == v ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
    // Centroid maps to (1/3, 1/3, 1/3).
    double cx = 0.0, cy = 0.0;
    for (int v = 0; v < 3; ++v) {
      cx += m.nodes[m.triangles[t][v]][0] / 3.0;
      cy += m.nodes[m.triangles[t][v]][1] / 3.0;
    }
    const auto l = barycentric(m, t, cx, cy);
    for (int k = 0; k < 3; ++k) CHECK(l[k] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
}

// ============================================================================
// Assembled stiffness
// ============================================================================

TEST_CASE("pre-elimination stiffness: zero row sums and element-loop energy identity") {
  const MeshPair mp = build_mesh_pair(8);
  const SpMat A = assemble_stiffness(mp);
  const int nv = mp.velocity.node_count();
  REQUIRE(A.rows() == 2 * nv);

  // Constants lie in the kernel before boundary conditions are applied.
  const Vec rowsum = A * Vec::Ones(2 * nv);
  CHECK(rowsum.cwiseAbs().maxCoeff() <= 1e-12);

  // x^T A x recomputed triangle by triangle: sum of area * |grad x|^2 over
  // both components.
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 5; ++trial) {
    Vec x(2 * nv);
    for (int i = 0; i < x.size(); ++i) x[i] = dist(rng);
    double energy = 0.0;
    for (int t = 0; t < mp.velocity.triangle_count(); ++t) {
      const auto g = p1_gradients(mp.velocity, t);
      const double area = mp.velocity.triangle_area(t);
      for (int comp = 0; comp < 2; ++comp) {
        double gx = 0.0, gy = 0.0;
        for (int v = 0; v < 3; ++v) {
          const double val = x[comp * nv + mp.velocity.triangles[t][v]];
          gx += val * g[v][0];
          gy += val * g[v][1];
        }
        energy += area * (gx * gx + gy * gy);
      }
    }
    const double quad_form = x.dot(A * x);
    CHECK(quad_form == doctest::Approx(energy).epsilon(1e-12));
  }
}

// ============================================================================
// Divergence coupling
// ============================================================================

TEST_CASE("divergence theorem: constant pressure tests only the boundary flux") {
  const MeshPair mp = build_mesh_pair(6);
  std::mt19937 rng(11);
  std::normal_distribution<double> dist;
  for (PressureKind kind : {PressureKind::Continuous, PressureKind::Discontinuous}) {
    const SpMat B = assemble_divergence(mp, kind);
    const int nv = mp.velocity.node_count();
    // Random field vanishing on the outer boundary.
    Vec v = Vec::Zero(2 * nv);
    for (int node = 0; node < nv; ++node) {
      if (mp.velocity.node_on_boundary(node)) continue;
      v[node] = dist(rng);
      v[nv + node] = dist(rng);
    }
    const Vec Bv = B * v;
    // Sum over all pressure DOFs weights div(v) by the constant function 1.
    CHECK(std::abs(Bv.sum()) <= 1e-12 * v.norm());
  }
}

TEST_CASE("after elimination the constant pressure annihilates B, and only it does") {
  for (PressureKind kind : {PressureKind::Continuous, PressureKind::Discontinuous}) {
    const MeshPair mp = build_mesh_pair(4);
    const MixedSystem sys = build_mixed_system(mp, kind);
    const Vec coeffs = Vec::Ones(sys.n_pressure).transpose() * sys.B;
    CHECK(coeffs.cwiseAbs().maxCoeff() <= 1e-12);

    // Kernel of B^T is exactly one-dimensional: rank(B) = n_pressure - 1.
    const Mat Bd = Mat(sys.B);
    Eigen::FullPivLU<Mat> lu(Bd);
    lu.setThreshold(1e-10);
    CHECK(lu.rank() == sys.n_pressure - 1);
  }
}

// ============================================================================
// Pressure Gram matrix
// ============================================================================

TEST_CASE("P1 pressure mass: unit total, support-area row sums, h^2-equivalent spectrum") {
  const MeshPair mp = build_mesh_pair(8);
  const SpMat Z = assemble_pressure_mass(mp.pressure);
  const int np = mp.pressure.node_count();
  const Vec ones = Vec::Ones(np);
  CHECK(std::abs(ones.dot(Z * ones) - 1.0) <= 1e-13);

  // Row sum q = integral of the hat function = |support(q)| / 3.
  std::vector<double> support(np, 0.0);
  for (int t = 0; t < mp.pressure.triangle_count(); ++t) {
    for (int v = 0; v < 3; ++v) {
      support[mp.pressure.triangles[t][v]] += mp.pressure.triangle_area(t);
    }
  }
  const Vec rowsum = Z * ones;
  for (int q = 0; q < np; ++q) {
    CHECK(rowsum[q] == doctest::Approx(support[q] / 3.0).epsilon(1e-12));
  }

  // Spectrum is equivalent to h^2 times the identity. The measured constants
  // are 0.068 h^2 (corner-node mode, mesh-size independent) and just below
  // 1.0 h^2; the substance is the h^2 proportionality across refinements.
  const auto extremes = [](int n) {
    const SpMat Zn = assemble_pressure_mass(build_mesh_pair(n).pressure);
    const Mat Zd = Mat(Zn);
    Eigen::SelfAdjointEigenSolver<Mat> es(Zd);
    return std::pair<double, double>(es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff());
  };
  const double h2 = mp.pressure.h * mp.pressure.h;
  const auto [min8, max8] = extremes(8);
  CHECK(min8 >= 0.06 * h2);
  CHECK(max8 <= 1.0 * h2);
  const auto [min16, max16] = extremes(16);
  CHECK(min16 / min8 == doctest::Approx(0.25).epsilon(1e-3));  // corner mode, constant in n
  CHECK(max16 / max8 >= 0.2);
  CHECK(max16 / max8 <= 0.3);
}

TEST_CASE("piecewise-constant pressure Gram is the macro-cell area diagonal") {
  const MeshPair mp = build_mesh_pair(4);
  const SpMat Z = assemble_pressure_gram(mp, PressureKind::Discontinuous);
  REQUIRE(Z.rows() == mp.pressure.triangle_count());
  const double cell_area = mp.pressure.h * mp.pressure.h / 2.0;
  const Mat Zd = Mat(Z);
  for (int i = 0; i < Zd.rows(); ++i) {
    for (int j = 0; j < Zd.cols(); ++j) {
      CHECK(Zd(i, j) == doctest::Approx(i == j ? cell_area : 0.0).epsilon(1e-14));
    }
  }
  CHECK(Zd.diagonal().sum() == doctest::Approx(1.0).epsilon(1e-13));
}

// ============================================================================
// Load vector
// ============================================================================

TEST_CASE("load: zero force gives zero, constant force gives support-area weights") {
  const MeshPair mp = build_mesh_pair(4);
  const Vec zero = assemble_load(mp, [](double, double) { return std::array<double, 2>{0, 0}; });
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  const double c1 = 0.75, c2 = -1.5;
  const Vec f =
      assemble_load(mp, [&](double, double) { return std::array<double, 2>{c1, c2}; });
  const int nv = mp.velocity.node_count();
  std::vector<double> support(nv, 0.0);
  for (int t = 0; t < mp.velocity.triangle_count(); ++t) {
    for (int v = 0; v < 3; ++v) {
      support[mp.velocity.triangles[t][v]] += mp.velocity.triangle_area(t);
    }
  }
  for (int node = 0; node < nv; ++node) {
    CHECK(f[node] == doctest::Approx(c1 * support[node] / 3.0).epsilon(1e-12));
    CHECK(f[nv + node] == doctest::Approx(c2 * support[node] / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("the default rule already resolves the standard body force") {
  const MeshPair mp = build_mesh_pair(16);
  const auto force = [](double x, double y) { return manufactured::body_force(x, y); };
  const Vec f4 = assemble_load_with_rule(mp, force, tri_quadrature_degree4());
  const Vec f6 = assemble_load_with_rule(mp, force, tri_quadrature_degree6());
  // Measured 1.4e-8 relative for this trigonometric integrand at h = 1/32;
  // five orders below the O(h^2) discretization error it feeds into.
  CHECK((f4 - f6).norm() <= 5e-8 * f6.norm());
}

// ============================================================================
// Dirichlet elimination
// ============================================================================

TEST_CASE("elimination keeps exactly the interior velocity DOFs") {
  const MeshPair mp = build_mesh_pair(1);  // velocity mesh 2x2, one interior node
  const MixedSystem sys = build_mixed_system(mp, PressureKind::Continuous);
  CHECK(sys.n_free_vel_nodes == 1);
  CHECK(sys.A.rows() == 2);
  CHECK(sys.A.cols() == 2);
  CHECK(sys.B.cols() == 2);

  // Index maps are mutually inverse.
  for (int fn = 0; fn < sys.n_free_vel_nodes; ++fn) {
    CHECK(sys.node_to_free[sys.free_to_node[fn]] == fn);
  }
  int boundary = 0;
  for (int node = 0; node < sys.n_vel_nodes; ++node) {
    if (sys.node_to_free[node] < 0) ++boundary;
  }
  CHECK(boundary == sys.n_vel_nodes - sys.n_free_vel_nodes);
}

TEST_CASE("eliminated stiffness is symmetric positive definite") {
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  for (int n : {4, 8}) {
    const MeshPair mp = build_mesh_pair(n);
    const MixedSystem sys = build_mixed_system(mp, PressureKind::Continuous);
    CHECK(relative_asymmetry(sys.A) <= 1e-13);

    Eigen::LLT<Mat> llt(Mat(sys.A));
    CHECK(llt.info() == Eigen::Success);

    for (int trial = 0; trial < 5; ++trial) {
      Vec x(sys.free_dof_count());
      for (int i = 0; i < x.size(); ++i) x[i] = dist(rng);
      CHECK(x.dot(sys.A * x) > 0.0);
    }
  }
}

} // TEST_SUITE("assembly")
