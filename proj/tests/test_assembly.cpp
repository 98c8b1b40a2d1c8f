#include <doctest.h>

#include <cmath>

#include "hdg/assembly.hpp"
#include "hdg/quadrature.hpp"

using namespace hdg;

namespace {

Mesh referenceTriangle() {
  Eigen::Matrix<double, Eigen::Dynamic, 2> v(3, 2);
  v << 0, 0, 1, 0, 0, 1;
  Eigen::Matrix<int, Eigen::Dynamic, 3> t(1, 3);
  t << 0, 1, 2;
  return make_mesh(v, t);
}

VectorField constantField(double a, double b) {
  return [a, b](double, const Eigen::Vector2d&) { return Eigen::Vector2d(a, b); };
}

Eigen::VectorXd constantCoefficients(Index K, int N) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(K * N);
  for (Index k = 0; k < K; ++k) c[k * N] = 1.0 / std::sqrt(2.0);
  return c;
}

EdgeQuadValues constantValues(const Mesh& mesh, const BasisSet& basis, double v) {
  return eval_on_quad_edge(mesh, basis, [v](double, const Eigen::Vector2d&) { return v; }, 0.0);
}

double dense(const SparseMatrix& m, Index i, Index j) { return m.coeff(i, j); }

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("element mass matrix is a scaled identity") {
  for (int p = 0; p <= kMaxDegree; ++p) {
    const BasisSet b = compute_bases_on_quad(p);
    const ReferenceBlocks ref = integrate_reference_blocks(b);
    const SparseMatrix m1 = assemble_mass_phi(referenceTriangle(), ref);
    CHECK((Eigen::MatrixXd(m1) - Eigen::MatrixXd::Identity(b.N, b.N)).cwiseAbs().maxCoeff() < 1e-13);

    const double h = 0.25;
    const Mesh mesh = generate_structured_mesh(4);
    const SparseMatrix m = assemble_mass_phi(mesh, ref);
    const Eigen::MatrixXd expected = h * h * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    CHECK((Eigen::MatrixXd(m) - expected).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(Eigen::MatrixXd(m).trace() == doctest::Approx(2.0 * 1.0 * b.N));
  }
}

TEST_CASE("advection blocks vanish for zero velocity and constant basis") {
  const Mesh mesh = generate_structured_mesh(2);
  {
    const BasisSet b = compute_bases_on_quad(2);
    const auto G = assemble_advection_elem(mesh, b, integrate_reference_blocks(b), constantField(0, 0), 0.0);
    CHECK(G[0].norm() == 0.0);
    CHECK(G[1].norm() == 0.0);
  }
  {
    const BasisSet b = compute_bases_on_quad(0);
    const auto G = assemble_advection_elem(mesh, b, integrate_reference_blocks(b), constantField(1, 0), 0.0);
    CHECK(G[0].norm() < 1e-15);
  }
}

TEST_CASE("advection block on the reference triangle matches an independent integral") {
  const int p = 1;
  const BasisSet b = compute_bases_on_quad(p);
  const auto G = assemble_advection_elem(referenceTriangle(), b, integrate_reference_blocks(b), constantField(1, 0), 0.0);
  const QuadRule2D q = quad_rule_triangle(10);
  Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(b.N, b.N);
  Eigen::VectorXd v;
  Eigen::Matrix<double, Eigen::Dynamic, 2> d;
  for (Index r = 0; r < q.size(); ++r) {
    eval_basis_2d(p, q.points(r, 0), q.points(r, 1), v, d);
    oracle += q.weights[r] * d.col(0) * v.transpose();
  }
  CHECK((Eigen::MatrixXd(G[0]) - oracle).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(G[1].norm() == 0.0);
}

TEST_CASE("discrete divergence theorem for constant velocity") {
  const Eigen::Vector2d u(0.7, -1.3);
  for (int p = 0; p <= kMaxDegree; ++p) {
    CAPTURE(p);
    const Mesh mesh = generate_structured_mesh(1, {0.0, 0.0, 2.0, 1.0});
    const BasisSet b = compute_bases_on_quad(p);
    const ReferenceBlocks ref = integrate_reference_blocks(b);
    const auto G = assemble_advection_elem(mesh, b, ref, constantField(u.x(), u.y()), 0.0);
    const Eigen::VectorXd lhs = (G[0] + G[1]) * constantCoefficients(mesh.numElements(), b.N);
    EdgeMask all(mesh.numElements());
    all.flags.setConstant(true);
    const auto unu = eval_normal_velocity(mesh, b, constantField(u.x(), u.y()), 0.0);
    const Eigen::VectorXd rhs = assemble_vec_edge_phi_int_val(mesh, all, b, unu);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("normal velocity") {
  const Mesh mesh = generate_structured_mesh(2);
  const BasisSet b = compute_bases_on_quad(2);
  const auto unu = eval_normal_velocity(mesh, b, constantField(1, 0), 0.0);
  const auto zero = eval_normal_velocity(mesh, b, constantField(0, 0), 0.0);
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      CHECK(zero[k][n].cwiseAbs().maxCoeff() == 0.0);
      if (mesh.normals[k][n].isApprox(Eigen::Vector2d(1, 0))) CHECK((unu[k][n].array() - 1.0).abs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("rotation field at edge midpoints on the two-element mesh") {
  const Mesh mesh = generate_structured_mesh(1);
  const BasisSet b = compute_bases_on_quad(0);  // single Gauss point at s = 1/2
  REQUIRE(b.quad1D.size() == 1);
  auto u = [](double, const Eigen::Vector2d& x) { return Eigen::Vector2d(0.5 - x.y(), x.x() - 0.5); };
  const auto unu = eval_normal_velocity(mesh, b, u, 0.0);
  for (Index k = 0; k < 2; ++k)
    for (int n = 0; n < 3; ++n) {
      const Eigen::Vector2d a = mesh.corner(k, (n + 1) % 3), c = mesh.corner(k, (n + 2) % 3);
      const Eigen::Vector2d mid = 0.5 * (a + c);
      const Eigen::Vector2d tangent = (c - a).normalized();
      const Eigen::Vector2d nu(tangent.y(), -tangent.x());
      CHECK(unu[k][n][0] == doctest::Approx(u(0.0, mid).dot(nu)));
    }
  // On the diagonal the rotation field is tangential.
  for (Index k = 0; k < 2; ++k)
    for (int n = 0; n < 3; ++n)
      if (mesh.isInterior(k, n)) CHECK(std::abs(unu[k][n][0]) < 1e-15);
}

TEST_CASE("edge phi-mu matrix weighted by values") {
  const Mesh mesh = generate_structured_mesh(1);
  const BasisSet b = compute_bases_on_quad(0);
  const ReferenceBlocks ref = integrate_reference_blocks(b);
  const auto ones = constantValues(mesh, b, 1.0);
  CHECK(assemble_mat_edge_phi_int_mu_val(mesh, EdgeMask(2), ref, ones).nonZeros() == 0);

  EdgeMask one(2);
  int kb = -1, nb = -1;
  for (int n = 0; n < 3 && kb < 0; ++n)
    if (!mesh.isInterior(0, n)) kb = 0, nb = n;
  one(kb, nb) = true;
  const SparseMatrix S = assemble_mat_edge_phi_int_mu_val(mesh, one, ref, ones);
  CHECK(S.nonZeros() == 1);
  CHECK(dense(S, kb, mesh.edgeOfElem(kb, nb)) == doctest::Approx(std::sqrt(2.0)));

  const auto unu = eval_normal_velocity(mesh, b, constantField(1, 0), 0.0);
  const SparseMatrix Si = assemble_mat_edge_phi_int_mu_val(mesh, interiorMask(mesh), ref, unu);
  int diag = -1;
  for (Index e = 0; e < mesh.numEdges(); ++e)
    if (!mesh.boundaryEdge[e]) diag = static_cast<int>(e);
  const double a = dense(Si, 0, diag), c = dense(Si, 1, diag);
  CHECK(std::abs(a) > 0.1);
  CHECK(a == doctest::Approx(-c));
}

TEST_CASE("edge phi-mu matrix and its transpose") {
  const Mesh mesh = generate_structured_mesh(1);
  for (int p = 0; p <= kMaxDegree; ++p) {
    const BasisSet b = compute_bases_on_quad(p);
    const ReferenceBlocks ref = integrate_reference_blocks(b);
    const SparseMatrix Rmu = assemble_mat_edge_phi_int_mu(mesh, interiorMask(mesh), ref);
    CHECK(assemble_mat_edge_phi_int_mu(mesh, EdgeMask(2), ref).nonZeros() == 0);
    const TimeIndependentBlocks fixed = assemble_time_independent(mesh, ref);
    CHECK((SparseMatrix(fixed.T) - SparseMatrix(Rmu.transpose())).norm() == 0.0);
    if (p == 0) {
      int diag = -1;
      for (Index e = 0; e < mesh.numEdges(); ++e)
        if (!mesh.boundaryEdge[e]) diag = static_cast<int>(e);
      const double len = mesh.lengthE[diag];
      CHECK(dense(Rmu, 0, diag) == doctest::Approx(std::sqrt(2.0) * len));
      CHECK(dense(Rmu, 1, diag) == doctest::Approx(std::sqrt(2.0) * len));
    }
  }
}

TEST_CASE("edge mass matrices") {
  const BasisSet b = compute_bases_on_quad(2);
  const ReferenceBlocks ref = integrate_reference_blocks(b);
  const Index Nb = b.Nbar;
  {
    const Mesh mesh = generate_structured_mesh(2);
    const Eigen::MatrixXd M = assemble_mat_edge_mu_mu(mesh, interiorMask(mesh), ref);
    for (Index e = 0; e < mesh.numEdges(); ++e) {
      const Eigen::MatrixXd blk = M.block(e * Nb, e * Nb, Nb, Nb);
      if (mesh.boundaryEdge[e])
        CHECK(blk.cwiseAbs().maxCoeff() == 0.0);
      else if (std::abs(mesh.lengthE[e] - 0.5) < 1e-14)
        CHECK((blk - Eigen::MatrixXd::Identity(Nb, Nb)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(assemble_mat_edge_mu_mu(mesh, EdgeMask(mesh.numElements()), ref).nonZeros() == 0);
  }
  {
    const Mesh mesh = generate_structured_mesh(4);
    const Eigen::MatrixXd M = assemble_mat_edge_mu_mu(mesh, exteriorMask(mesh), ref);
    for (Index e = 0; e < mesh.numEdges(); ++e) {
      const Eigen::MatrixXd blk = M.block(e * Nb, e * Nb, Nb, Nb);
      const double expected = mesh.boundaryEdge[e] ? 0.25 : 0.0;
      CHECK((blk - expected * Eigen::MatrixXd::Identity(Nb, Nb)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("interior trace mass") {
  const Mesh mesh = generate_structured_mesh(3);
  const BasisSet b0 = compute_bases_on_quad(0);
  const SparseMatrix R0 = assemble_mat_edge_phi_phi_interior(mesh, integrate_reference_blocks(b0));
  for (Index k = 0; k < mesh.numElements(); ++k) {
    double len = 0.0;
    for (int n = 0; n < 3; ++n)
      if (mesh.isInterior(k, n)) len += mesh.edgeLength(k, n);
    CHECK(dense(R0, k, k) == doctest::Approx(2.0 * len));
  }
  const BasisSet b = compute_bases_on_quad(3);
  const ReferenceBlocks ref = integrate_reference_blocks(b);
  const SparseMatrix R = assemble_mat_edge_phi_phi_interior(mesh, ref);
  CHECK((SparseMatrix(R.transpose()) - R).norm() < 1e-13 * R.norm());
  CHECK(assemble_mat_edge_phi_phi_interior(referenceTriangle(), ref).norm() == 0.0);
}

TEST_CASE("Dirichlet edge vector") {
  const Mesh mesh = generate_structured_mesh(1);
  const BasisSet b = compute_bases_on_quad(3);
  EdgeMask bottom(2);
  int eb = -1;
  for (Index k = 0; k < 2; ++k)
    for (int n = 0; n < 3; ++n)
      if (!mesh.isInterior(k, n) && mesh.normals[k][n].y() < -0.5) {
        bottom(k, n) = true;
        eb = mesh.edgeOfElem(k, n);
      }
  REQUIRE(eb >= 0);
  const Index Nb = b.Nbar;
  const auto zero = assemble_vec_edge_mu_func_cont(mesh, bottom, b, [](double, const Eigen::Vector2d&) { return 0.0; }, 0.0);
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
  const auto one = assemble_vec_edge_mu_func_cont(mesh, bottom, b, [](double, const Eigen::Vector2d&) { return 1.0; }, 0.0);
  CHECK(one[eb * Nb] == doctest::Approx(1.0));
  CHECK(one.segment(eb * Nb + 1, Nb - 1).cwiseAbs().maxCoeff() < 1e-14);
  const auto lin = assemble_vec_edge_mu_func_cont(mesh, bottom, b, [](double, const Eigen::Vector2d& x) { return x.x(); }, 0.0);
  CHECK(lin[eb * Nb] == doctest::Approx(0.5));
  CHECK(lin[eb * Nb + 1] == doctest::Approx(-1.0 / (2.0 * std::sqrt(3.0))));
  CHECK(std::abs(lin[eb * Nb + 2]) < 1e-14);
}

TEST_CASE("inflow flux vector") {
  const Mesh mesh = generate_structured_mesh(1);
  const BasisSet b = compute_bases_on_quad(0);
  const auto zero = constantValues(mesh, b, 0.0);
  CHECK(assemble_vec_edge_phi_int_val(mesh, exteriorMask(mesh), b, zero).cwiseAbs().maxCoeff() == 0.0);

  EdgeMask left(2);
  int kl = -1;
  for (Index k = 0; k < 2; ++k)
    for (int n = 0; n < 3; ++n)
      if (!mesh.isInterior(k, n) && mesh.normals[k][n].x() < -0.5) left(k, n) = true, kl = static_cast<int>(k);
  const Eigen::VectorXd ones = assemble_vec_edge_phi_int_val(mesh, left, b, constantValues(mesh, b, 1.0));
  CHECK(ones[kl] == doctest::Approx(std::sqrt(2.0)));

  const auto unu = eval_normal_velocity(mesh, b, constantField(1, 0), 0.0);
  const Eigen::VectorXd f = assemble_vec_edge_phi_int_val(mesh, left, b, unu);
  CHECK(f[kl] == doctest::Approx(-std::sqrt(2.0) * 1.0));
  CHECK(f[1 - kl] == 0.0);
}

TEST_CASE("source vector") {
  const Mesh mesh = generate_structured_mesh(3);
  const BasisSet b = compute_bases_on_quad(2);
  CHECK(assemble_vec_source(mesh, b, [](double, const Eigen::Vector2d&) { return 0.0; }, 0.0).norm() == 0.0);
  const Eigen::VectorXd h = assemble_vec_source(mesh, b, [](double, const Eigen::Vector2d&) { return 1.0; }, 0.0);
  for (Index k = 0; k < mesh.numElements(); ++k) {
    CHECK(h[k * b.N] == doctest::Approx(std::sqrt(2.0) * mesh.areaT[k]));
    CHECK(h.segment(k * b.N + 1, b.N - 1).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("smooth source vector against a refined oracle") {
  const int p = 2;
  const Mesh mesh = generate_structured_mesh(24);
  const BasisSet b = compute_bases_on_quad(p, 2 * p + 5);
  auto xi = [](double, const Eigen::Vector2d& x) { return std::cos(7 * x.x()) * std::cos(7 * x.y()) + x.x(); };
  const Eigen::VectorXd h = assemble_vec_source(mesh, b, xi, 0.0);
  const QuadRule2D q = quad_rule_triangle(20);
  Eigen::VectorXd v;
  Eigen::Matrix<double, Eigen::Dynamic, 2> d;
  double worst = 0.0;
  for (Index k = 0; k < mesh.numElements(); ++k) {
    Eigen::VectorXd oracle = Eigen::VectorXd::Zero(b.N);
    for (Index r = 0; r < q.size(); ++r) {
      eval_basis_2d(p, q.points(r, 0), q.points(r, 1), v, d);
      oracle += q.weights[r] * xi(0.0, mesh.toPhysical(k, q.point(r))) * v;
    }
    oracle *= 2.0 * mesh.areaT[k];
    worst = std::max(worst, (oracle - h.segment(k * b.N, b.N)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("assembled dimensions") {
  const Mesh mesh = generate_structured_mesh(2);
  const BasisSet b = compute_bases_on_quad(2);
  const ReferenceBlocks ref = integrate_reference_blocks(b);
  SystemBlocks blocks;
  blocks.alpha = 1.0;
  blocks.fixed = assemble_time_independent(mesh, ref);
  blocks.current = assemble_time_dependent(mesh, b, ref, constantField(1, 0.5),
                                           [](double, const Eigen::Vector2d&) { return 1.0; },
                                           [](double, const Eigen::Vector2d&) { return 0.0; }, 0.0);
  const CompositeBlocks c = blocks.compose();
  const Index KN = mesh.numElements() * b.N, EN = mesh.numEdges() * b.Nbar;
  CHECK(c.Lbar.rows() == KN);
  CHECK(c.Lbar.cols() == KN);
  CHECK(c.Mbar.rows() == KN);
  CHECK(c.Mbar.cols() == EN);
  CHECK(c.N.rows() == EN);
  CHECK(c.N.cols() == KN);
  CHECK(c.P.rows() == EN);
  CHECK(c.Bphi.size() == KN);
  CHECK(c.Bmu.size() == EN);
}

}
