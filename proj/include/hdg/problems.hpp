#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdg/basis.hpp"
#include "hdg/mesh.hpp"
#include "hdg/types.hpp"

namespace hdg {

/// Data of one advection problem dc/dt + div(u c) = xi on a rectangle.
struct ProblemDefinition {
  std::string name;
  Rectangle domain;
  VectorField velocity;
  SpaceField c0;
  SpaceTimeField cD;
  SpaceTimeField source;
  /// Empty when no closed-form solution is known.
  SpaceTimeField exact;
  /// Penalty; unset selects max |u . nu| at t = 0.
  std::optional<double> alpha = 1.0;
  bool steady = false;
  double tEnd = 0.0;
  int numSteps = 0;
  int p = 1;
  int dirkOrder = 2;
  int level = 1;
};

/// Names accepted by builtin_testcase.
const std::vector<std::string>& builtin_testcase_names();

/// Manufactured cases "steady", "unsteady_ode", "unsteady_pde" and the
/// rotation benchmark "solid_body". Throws ConfigError for unknown names.
ProblemDefinition builtin_testcase(const std::string& name);

/// Solid-body rotation initial scene (slotted cylinder, cone, hump).
double solid_body_initial(const Eigen::Vector2d& x);

/// L2 projection onto the broken polynomial space.
Eigen::VectorXd project_initial(const Mesh& mesh, const BasisSet& basis, const SpaceField& c0);

/// ||c_h - exact(t)||_L2 with the element rule of order 2p + 1.
double compute_l2_error(const Mesh& mesh, int p, const Eigen::VectorXd& C, const SpaceTimeField& exact, double t);

/// Discrete solution evaluated at reference point xhat of element k.
double evaluate_solution(const Eigen::VectorXd& C, int p, Index k, const Eigen::Vector2d& xhat);

/// EOC_j = ln(e_{j-1}/e_j) / ln(h_{j-1}/h_j) for j >= 1; result has one
/// entry fewer than the inputs.
Eigen::VectorXd compute_eoc(const Eigen::VectorXd& errors, const Eigen::VectorXd& meshSizes);

/// Mesh family of the convergence studies: h_j = 1/(3 * 2^j), 3 * 2^j cells per side.
inline int cells_for_level(int j) { return 3 << j; }
inline double mesh_size_for_level(int j) { return 1.0 / cells_for_level(j); }

}  // namespace hdg
