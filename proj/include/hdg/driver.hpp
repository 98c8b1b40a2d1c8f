#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdg/io.hpp"
#include "hdg/mesh.hpp"
#include "hdg/problems.hpp"

namespace hdg {

struct RunReport {
  std::string testcase;
  int p = 0;
  int dirkOrder = 0;
  long numElements = 0;
  long elemUnknowns = 0;
  long edgeUnknowns = 0;
  double alpha = 0.0;
  double h = 0.0;
  double dt = 0.0;
  int steps = 0;
  double tFinal = 0.0;
  std::optional<double> error;
  double minValue = 0.0;
  double maxValue = 0.0;
  double wallSeconds = 0.0;
  std::vector<std::string> files;
};

/// A fully resolved run: problem data, mesh and step control.
struct ResolvedRun {
  ProblemDefinition problem;
  Mesh mesh;
  double h = 0.0;
  int steps = 0;
  double dt = 0.0;
  long blockSize = 0;
};

/// Applies config overrides to the named testcase and builds the mesh.
ResolvedRun configure(const RunConfig& cfg);

/// configure, preprocess, initialize, solve or step, postprocess.
/// Errors propagate as ConfigError, NumericalError or IoError with the phase name prepended.
RunReport run(const RunConfig& cfg);

/// Runs cfg for every (level, p) pair. For unsteady_ode the level selects the
/// time step 1/(5 * 2^j) on a fixed mesh, and h holds that time step.
std::vector<ConvergenceRow> run_sweep(const RunConfig& cfg, const std::vector<int>& degrees,
                                      const std::vector<int>& levels);

/// Maximum and minimum of c_h over the corners and quadrature points of every element.
std::pair<double, double> solution_range(const Mesh& mesh, int p, const Eigen::VectorXd& C);

}  // namespace hdg
