#include "hdg/condensation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "hdg/errors.hpp"

namespace hdg {

namespace {

constexpr double kMinRcond = 1e-14;

double relative(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

}  // namespace

Index default_block_size(int p, Index localSize) {
  const Index scaled = static_cast<Index>(std::ldexp(32.0, -p)) * localSize;
  return std::max(localSize, scaled - scaled % localSize);
}

SparseMatrix blkinv(const SparseMatrix& L, Index localSize, Index blockSize) {
  if (localSize <= 0) throw ConfigError("block-inverse local size must be positive");
  if (L.rows() != L.cols() || L.rows() % localSize != 0)
    throw ConfigError("block-inverse input must be square with a multiple of " + std::to_string(localSize) +
                      " rows");
  if (blockSize <= 0 || blockSize % localSize != 0)
    throw ConfigError("blockSize " + std::to_string(blockSize) + " must be a positive multiple of " +
                      std::to_string(localSize));

  const Index N = localSize;
  const Index K = L.rows() / N;
  const Index perBatch = blockSize / N;

  std::vector<Triplet> triplets;
  triplets.reserve(K * N * N);
  Eigen::MatrixXd block(N, N);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  for (Index first = 0; first < K; first += perBatch) {
    const Index last = std::min(K, first + perBatch);
    for (Index k = first; k < last; ++k) {
      block = L.block(k * N, k * N, N, N).toDense();
      lu.compute(block);
      const double rc = lu.rcond();
      if (!(rc > kMinRcond))
        throw SingularBlockError(static_cast<int>(k), "element block " + std::to_string(k) +
                                                          " is singular (rcond " + std::to_string(rc) + ")");
      const Eigen::MatrixXd inv = lu.inverse();
      for (Index j = 0; j < N; ++j)
        for (Index i = 0; i < N; ++i) triplets.emplace_back(k * N + i, k * N + j, inv(i, j));
    }
  }
  SparseMatrix out(L.rows(), L.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

namespace {

using SkeletonLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

void factorize(SkeletonLU& lu, const SparseMatrix& schur) {
  lu.compute(schur);
  if (lu.info() != Eigen::Success)
    throw SchurSolveError("skeleton system factorization failed: " + lu.lastErrorMessage());
}

// Skeleton solve plus local recovery of C.
CondensedSolution backSubstitute(SkeletonLU& lu, const StageSystem& sys, const SparseMatrix& Linv,
                                 const Eigen::VectorXd& rhs) {
  CondensedSolution sol;
  sol.Lambda = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.Lambda.allFinite())
    throw SchurSolveError("skeleton system solve failed");
  sol.C = Linv * (sys.Q - sys.M * sol.Lambda);
  return sol;
}

bool identical(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  if (!a.isCompressed() || !b.isCompressed()) return false;
  const Index nnz = a.nonZeros();
  return std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1, b.outerIndexPtr()) &&
         std::equal(a.innerIndexPtr(), a.innerIndexPtr() + nnz, b.innerIndexPtr()) &&
         std::equal(a.valuePtr(), a.valuePtr() + nnz, b.valuePtr());
}

}  // namespace

CondensedSolution condense_and_solve(const StageSystem& sys, Index localSize, Index blockSize) {
  const SparseMatrix Linv = blkinv(sys.L, localSize, blockSize);
  const SparseMatrix NLinv = sys.N * Linv;
  const SparseMatrix schur = sys.P - NLinv * sys.M;
  SkeletonLU lu;
  factorize(lu, schur);
  return backSubstitute(lu, sys, Linv, sys.Bmu - NLinv * sys.Q);
}

struct CondensationSolver::Cache {
  SparseMatrix schur;
  SkeletonLU lu;
};

CondensationSolver::CondensationSolver(Index localSize, Index blockSize)
    : localSize_(localSize), blockSize_(blockSize) {}
CondensationSolver::~CondensationSolver() = default;
CondensationSolver::CondensationSolver(CondensationSolver&&) noexcept = default;
CondensationSolver& CondensationSolver::operator=(CondensationSolver&&) noexcept = default;

CondensedSolution CondensationSolver::solve(const StageSystem& sys) {
  const SparseMatrix Linv = blkinv(sys.L, localSize_, blockSize_);
  const SparseMatrix NLinv = sys.N * Linv;
  SparseMatrix schur = sys.P - NLinv * sys.M;
  schur.makeCompressed();
  if (!cache_ || !identical(schur, cache_->schur)) {
    cache_.reset();
    auto fresh = std::make_unique<Cache>();
    fresh->schur = std::move(schur);
    factorize(fresh->lu, fresh->schur);
    ++factorizations_;
    cache_ = std::move(fresh);
  }
  return backSubstitute(cache_->lu, sys, Linv, sys.Bmu - NLinv * sys.Q);
}

CondensedSolution solve_monolithic(const StageSystem& sys) {
  const Index n = sys.L.rows();
  const Index m = sys.P.rows();
  std::vector<Triplet> triplets;
  triplets.reserve(sys.L.nonZeros() + sys.M.nonZeros() + sys.N.nonZeros() + sys.P.nonZeros());
  auto append = [&](const SparseMatrix& A, Index r0, Index c0) {
    for (Index j = 0; j < A.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(A, j); it; ++it) triplets.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
  };
  append(sys.L, 0, 0);
  append(sys.M, 0, n);
  append(sys.N, n, 0);
  append(sys.P, n, n);
  SparseMatrix A(n + m, n + m);
  A.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd rhs(n + m);
  rhs << sys.Q, sys.Bmu;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success) throw NumericalError("monolithic factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs);
  return {x.head(n), x.tail(m)};
}

Eigen::Vector2d stage_residuals(const StageSystem& sys, const CondensedSolution& sol) {
  const double r1 = (sys.L * sol.C + sys.M * sol.Lambda - sys.Q).norm();
  const double r2 = (sys.N * sol.C + sys.P * sol.Lambda - sys.Bmu).norm();
  return {relative(r1, sys.Q.norm()), relative(r2, sys.Bmu.norm())};
}

}  // namespace hdg
