#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "hdg/assembly.hpp"
#include "hdg/basis.hpp"
#include "hdg/condensation.hpp"
#include "hdg/mesh.hpp"
#include "hdg/problems.hpp"

namespace hdg {

/// Stiffly accurate DIRK scheme: A lower triangular, b equal to the last row of A.
struct DirkTableau {
  int stages = 0;
  int order = 0;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// Implicit Euler (1), two-stage SDIRK (2), Alexander's three-stage SDIRK (3)
/// and the five-stage SDIRK of Hairer and Wanner (4).
DirkTableau dirk_tableau(int order);

/// Mesh plus everything that depends only on mesh and degree.
struct Discretization {
  Mesh mesh;
  BasisSet basis;
  ReferenceBlocks ref;
  SystemBlocks blocks;

  int p() const { return basis.p; }
  Index numElemUnknowns() const { return mesh.numElements() * basis.N; }
  Index numEdgeUnknowns() const { return mesh.numEdges() * basis.Nbar; }
};

/// Builds bases and time-independent blocks. The penalty is the problem's
/// override if present, otherwise max |u . nu| over all edge quadrature
/// points at t = 0.
Discretization make_discretization(Mesh mesh, int p, const ProblemDefinition& problem);

double resolve_alpha(const Mesh& mesh, const BasisSet& basis, const ProblemDefinition& problem);

struct TimeState {
  double t = 0.0;
  int step = 0;
  Eigen::VectorXd C;
  Eigen::VectorXd Lambda;
  std::vector<Eigen::VectorXd> stageResiduals;
};

/// Stage system for the stationary equations at time t.
StageSystem steady_system(Discretization& disc, const ProblemDefinition& problem, double t);

/// Solves the stationary coupled system at t = 0.
CondensedSolution solve_steady(Discretization& disc, const ProblemDefinition& problem,
                               CondensationSolver& solver);

/// Solves one implicit stage system.
using StageSolver = std::function<CondensedSolution(const StageSystem&)>;

/// One DIRK step of size dt. Time-dependent blocks are reassembled at every
/// stage time; the last stage is the new state.
TimeState dirk_step(const TimeState& state, Discretization& disc, const ProblemDefinition& problem,
                    const DirkTableau& tableau, double dt, const StageSolver& solve);
TimeState dirk_step(const TimeState& state, Discretization& disc, const ProblemDefinition& problem,
                    const DirkTableau& tableau, double dt, CondensationSolver& solver);

}  // namespace hdg
