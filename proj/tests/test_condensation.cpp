#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "hdg/assembly.hpp"
#include "hdg/condensation.hpp"
#include "hdg/errors.hpp"
#include "hdg/timestepping.hpp"

using namespace hdg;

namespace {

SparseMatrix identity(Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

// Block-diagonal matrix of K random blocks, each diagonally dominant.
SparseMatrix randomBlockDiagonal(Index K, Index N, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Triplet> t;
  for (Index k = 0; k < K; ++k)
    for (Index i = 0; i < N; ++i)
      for (Index j = 0; j < N; ++j) t.emplace_back(k * N + i, k * N + j, dist(rng) + (i == j ? 2.0 * N : 0.0));
  SparseMatrix m(K * N, K * N);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double maxRelDiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

ProblemDefinition transportProblem() {
  ProblemDefinition pd;
  pd.name = "transport";
  pd.velocity = [](double, const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 0.0); };
  pd.cD = [](double, const Eigen::Vector2d& x) { return 1.0 + x.y(); };
  pd.source = [](double, const Eigen::Vector2d&) { return 0.0; };
  pd.c0 = [](const Eigen::Vector2d&) { return 0.0; };
  pd.steady = true;
  return pd;
}

}  // namespace

TEST_SUITE("condensation") {

TEST_CASE("default block size heuristic") {
  CHECK(default_block_size(0, 1) == 32);
  CHECK(default_block_size(1, 3) == 48);
  CHECK(default_block_size(2, 6) == 48);
  CHECK(default_block_size(4, 15) == 30);
  CHECK(default_block_size(6, 28) == 28);
}

TEST_CASE("block inverse of identity and mass matrices") {
  const SparseMatrix I = identity(12);
  CHECK((blkinv(I, 3, 6) - I).norm() == 0.0);
  const Mesh mesh = generate_structured_mesh(3);
  const BasisSet b = compute_bases_on_quad(2);
  const SparseMatrix M = assemble_mass_phi(mesh, integrate_reference_blocks(b));
  const SparseMatrix Minv = blkinv(M, b.N, default_block_size(2, b.N));
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int i = 0; i < b.N; ++i) CHECK(Minv.coeff(k * b.N + i, k * b.N + i) == doctest::Approx(1.0 / (2.0 * mesh.areaT[k])));
  CHECK(Minv.nonZeros() == M.rows() * b.N);
}

TEST_CASE("block inverse matches a dense inverse and ignores batching") {
  const SparseMatrix L = randomBlockDiagonal(4, 3, 7);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(L).inverse();
  const Eigen::MatrixXd ref = blkinv(L, 3, 3);
  CHECK((ref - dense).cwiseAbs().maxCoeff() < 1e-12);
  for (Index bs : {Index(6), Index(12), Index(48), default_block_size(1, 3)})
    CHECK((Eigen::MatrixXd(blkinv(L, 3, bs)) - ref).cwiseAbs().maxCoeff() < 1e-12);
  const SparseMatrix big = randomBlockDiagonal(37, 6, 11);
  const Eigen::MatrixXd prod = Eigen::MatrixXd(blkinv(big, 6, 48) * big);
  CHECK((prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("block inverse errors") {
  SparseMatrix L = identity(9);
  L.coeffRef(4, 4) = 0.0;
  L.coeffRef(3, 3) = 0.0;
  L.coeffRef(5, 5) = 0.0;
  try {
    blkinv(L, 3, 3);
    FAIL("expected a singular block error");
  } catch (const SingularBlockError& e) {
    CHECK(e.element() == 1);
  }
  CHECK_THROWS_AS(blkinv(identity(9), 3, 4), ConfigError);
  CHECK_THROWS_AS(blkinv(identity(10), 3, 3), ConfigError);
}

TEST_CASE("decoupled system") {
  StageSystem s;
  s.L = randomBlockDiagonal(3, 2, 3);
  s.M = SparseMatrix(6, 4);
  s.N = SparseMatrix(4, 6);
  s.P = identity(4);
  s.Q = Eigen::VectorXd::LinSpaced(6, -1.0, 2.0);
  s.Bmu = Eigen::VectorXd::LinSpaced(4, 3.0, 5.0);
  const CondensedSolution sol = condense_and_solve(s, 2, 2);
  CHECK(maxRelDiff(sol.C, Eigen::MatrixXd(s.L).inverse() * s.Q) < 1e-13);
  CHECK(maxRelDiff(sol.Lambda, s.Bmu) < 1e-15);
}

TEST_CASE("mass matrix system returns the constant vector") {
  const Mesh mesh = generate_structured_mesh(2);
  const BasisSet b = compute_bases_on_quad(1);
  StageSystem s;
  s.L = assemble_mass_phi(mesh, integrate_reference_blocks(b));
  const Index n = s.L.rows(), m = mesh.numEdges() * b.Nbar;
  s.M = SparseMatrix(n, m);
  s.N = SparseMatrix(m, n);
  s.P = identity(m);
  s.Q = s.L * Eigen::VectorXd::Ones(n);
  s.Bmu = Eigen::VectorXd::Zero(m);
  const CondensedSolution sol = condense_and_solve(s, b.N, b.N);
  CHECK((sol.C.array() - 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("condensed and monolithic solves agree on a small transport problem") {
  const ProblemDefinition pd = transportProblem();
  for (int p = 0; p <= kMaxDegree; ++p) {
    CAPTURE(p);
    Discretization disc = make_discretization(generate_structured_mesh(1), p, pd);
    const StageSystem sys = steady_system(disc, pd, 0.0);
    const CondensedSolution a = condense_and_solve(sys, disc.basis.N, disc.basis.N);
    const CondensedSolution b = solve_monolithic(sys);
    CHECK(maxRelDiff(a.C, b.C) < 1e-10);
    CHECK(maxRelDiff(a.Lambda, b.Lambda) < 1e-10);
    const Eigen::Vector2d res = stage_residuals(sys, a);
    CHECK(res[0] < 1e-9);
    CHECK(res[1] < 1e-9);
  }
}

TEST_CASE("singular skeleton system is reported separately") {
  StageSystem s;
  s.L = identity(3);
  s.M = SparseMatrix(3, 2);
  s.N = SparseMatrix(2, 3);
  s.P = SparseMatrix(2, 2);
  s.Q = Eigen::VectorXd::Ones(3);
  s.Bmu = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(condense_and_solve(s, 1, 1), SchurSolveError);
}

TEST_CASE("solver reuses the factorization only for identical systems") {
  const ProblemDefinition pd = transportProblem();
  Discretization disc = make_discretization(generate_structured_mesh(3), 2, pd);
  StageSystem sys = steady_system(disc, pd, 0.0);
  CondensationSolver solver(disc.basis.N, default_block_size(2, disc.basis.N));
  const CondensedSolution first = solver.solve(sys);
  sys.Q *= 2.0;
  sys.Bmu *= 2.0;
  const CondensedSolution second = solver.solve(sys);
  CHECK(solver.factorizations() == 1);
  CHECK(maxRelDiff(second.C, 2.0 * first.C) < 1e-12);
  const CondensedSolution direct = condense_and_solve(sys, disc.basis.N, disc.basis.N);
  CHECK((second.C - direct.C).cwiseAbs().maxCoeff() == 0.0);
  sys.P *= 1.5;
  solver.solve(sys);
  CHECK(solver.factorizations() == 2);
}

}
