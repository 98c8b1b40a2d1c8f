#pragma once

#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hdg/types.hpp"

namespace hdg {

/// One implicit stage written as
///   L C + M Lambda = Q,   N C + P Lambda = Bmu,
/// with L block-diagonal (blocks of size localSize).
struct StageSystem {
  SparseMatrix L, M, N, P;
  Eigen::VectorXd Q, Bmu;
};

/// max(N, 32 * 2^-p * N), rounded down to a multiple of N.
Index default_block_size(int p, Index localSize);

/// Inverts every localSize x localSize diagonal block of L. Blocks are
/// processed in batches of blockSize / localSize; the batching only changes
/// the work decomposition, not the result. Throws SingularBlockError.
SparseMatrix blkinv(const SparseMatrix& L, Index localSize, Index blockSize);

struct CondensedSolution {
  Eigen::VectorXd C;
  Eigen::VectorXd Lambda;
};

/// Eliminates C, solves the skeleton system with sparse LU and recovers C
/// locally. Throws SingularBlockError or SchurSolveError.
CondensedSolution condense_and_solve(const StageSystem& sys, Index localSize, Index blockSize);

/// Reference solve of the full coupled system without condensation.
CondensedSolution solve_monolithic(const StageSystem& sys);

/// Relative residuals of the two block equations.
Eigen::Vector2d stage_residuals(const StageSystem& sys, const CondensedSolution& sol);

/// Condensed solver that keeps the last skeleton factorization and reuses it
/// when the next Schur matrix is bitwise identical (time-independent velocity
/// with a constant DIRK diagonal). Results equal those of condense_and_solve.
class CondensationSolver {
 public:
  CondensationSolver(Index localSize, Index blockSize);
  ~CondensationSolver();
  CondensationSolver(CondensationSolver&&) noexcept;
  CondensationSolver& operator=(CondensationSolver&&) noexcept;

  CondensedSolution solve(const StageSystem& sys);

  Index localSize() const { return localSize_; }
  Index blockSize() const { return blockSize_; }
  /// Number of skeleton factorizations performed so far.
  long factorizations() const { return factorizations_; }

 private:
  struct Cache;
  Index localSize_;
  Index blockSize_;
  long factorizations_ = 0;
  std::unique_ptr<Cache> cache_;
};

}  // namespace hdg
