#include "hdg/problems.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"

namespace hdg {

namespace {

// Manufactured field cos(7x) cos(7y) and its gradient.
double cosField(const Eigen::Vector2d& x) { return std::cos(7.0 * x[0]) * std::cos(7.0 * x[1]); }

Eigen::Vector2d cosFieldGrad(const Eigen::Vector2d& x) {
  return {-7.0 * std::sin(7.0 * x[0]) * std::cos(7.0 * x[1]), -7.0 * std::cos(7.0 * x[0]) * std::sin(7.0 * x[1])};
}

// u = (exp((x+y)/2), exp((x-y)/2)), so div u = (u1 - u2)/2.
Eigen::Vector2d manufacturedVelocity(const Eigen::Vector2d& x) {
  return {std::exp(0.5 * (x[0] + x[1])), std::exp(0.5 * (x[0] - x[1]))};
}

double manufacturedDivergence(const Eigen::Vector2d& x) {
  const Eigen::Vector2d u = manufacturedVelocity(x);
  return 0.5 * (u[0] - u[1]);
}

// div(u c) for the stationary part of the manufactured solutions.
double steadyFlux(const Eigen::Vector2d& x) {
  return manufacturedDivergence(x) * cosField(x) + manufacturedVelocity(x).dot(cosFieldGrad(x));
}

ProblemDefinition steadyCase() {
  ProblemDefinition pd;
  pd.name = "steady";
  pd.steady = true;
  pd.velocity = [](double, const Eigen::Vector2d& x) { return manufacturedVelocity(x); };
  pd.exact = [](double, const Eigen::Vector2d& x) { return cosField(x); };
  pd.c0 = cosField;
  pd.cD = pd.exact;
  pd.source = [](double, const Eigen::Vector2d& x) { return steadyFlux(x); };
  return pd;
}

ProblemDefinition unsteadyOdeCase() {
  ProblemDefinition pd;
  pd.name = "unsteady_ode";
  pd.tEnd = 2.0;
  pd.numSteps = 40;
  pd.level = 2;
  pd.velocity = [](double, const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
  pd.exact = [](double t, const Eigen::Vector2d&) { return std::exp(-t); };
  pd.c0 = [](const Eigen::Vector2d&) { return 1.0; };
  pd.cD = pd.exact;
  pd.source = [](double t, const Eigen::Vector2d&) { return -std::exp(-t); };
  return pd;
}

ProblemDefinition unsteadyPdeCase() {
  ProblemDefinition pd;
  pd.name = "unsteady_pde";
  pd.tEnd = 2.0;
  pd.numSteps = 20;
  pd.velocity = [](double, const Eigen::Vector2d& x) { return manufacturedVelocity(x); };
  pd.exact = [](double t, const Eigen::Vector2d& x) { return cosField(x) + std::exp(-t); };
  pd.c0 = [](const Eigen::Vector2d& x) { return cosField(x) + 1.0; };
  pd.cD = pd.exact;
  pd.source = [](double t, const Eigen::Vector2d& x) {
    return -std::exp(-t) + steadyFlux(x) + manufacturedDivergence(x) * std::exp(-t);
  };
  return pd;
}

ProblemDefinition solidBodyCase() {
  ProblemDefinition pd;
  pd.name = "solid_body";
  pd.tEnd = 2.0 * M_PI;
  pd.numSteps = 320;
  pd.p = 2;
  pd.dirkOrder = 3;
  pd.level = -1;
  pd.velocity = [](double, const Eigen::Vector2d& x) { return Eigen::Vector2d(0.5 - x[1], x[0] - 0.5); };
  pd.c0 = solid_body_initial;
  pd.cD = [](double, const Eigen::Vector2d&) { return 0.0; };
  pd.source = [](double, const Eigen::Vector2d&) { return 0.0; };
  // One full revolution returns the initial scene.
  pd.exact = [](double, const Eigen::Vector2d& x) { return solid_body_initial(x); };
  return pd;
}

}  // namespace

const std::vector<std::string>& builtin_testcase_names() {
  static const std::vector<std::string> names{"steady", "unsteady_ode", "unsteady_pde", "solid_body"};
  return names;
}

ProblemDefinition builtin_testcase(const std::string& name) {
  if (name == "steady") return steadyCase();
  if (name == "unsteady_ode") return unsteadyOdeCase();
  if (name == "unsteady_pde") return unsteadyPdeCase();
  if (name == "solid_body") return solidBodyCase();
  throw ConfigError("unknown testcase '" + name + "' (expected steady, unsteady_ode, unsteady_pde or solid_body)");
}

double solid_body_initial(const Eigen::Vector2d& x) {
  constexpr double r = 0.0225;
  auto G = [](const Eigen::Vector2d& x, double x0, double y0) { return (x - Eigen::Vector2d(x0, y0)).norm() / 0.15; };
  auto inDisc = [&](double x0, double y0) {
    return (x[0] - x0) * (x[0] - x0) + (x[1] - y0) * (x[1] - y0) <= r;
  };
  if (inDisc(0.5, 0.75) && (x[0] <= 0.475 || x[0] >= 0.525 || x[1] >= 0.85)) return 1.0;
  if (inDisc(0.5, 0.25)) return 1.0 - G(x, 0.5, 0.25);
  if (inDisc(0.25, 0.5)) return 0.25 * (1.0 + std::cos(M_PI * G(x, 0.25, 0.5)));
  return 0.0;
}

Eigen::VectorXd project_initial(const Mesh& mesh, const BasisSet& basis, const SpaceField& c0) {
  const Index N = basis.N;
  const Index R = basis.quad2D.size();
  // The reference mass matrix is the identity up to rounding, but solve
  // against it anyway so the projection is exact for any rule.
  const Eigen::MatrixXd mass = basis.phi2D * basis.quad2D.weights.asDiagonal() * basis.phi2D.transpose();
  const Eigen::LLT<Eigen::MatrixXd> llt(mass);
  Eigen::VectorXd C(mesh.numElements() * N);
  Eigen::VectorXd f(R);
  for (Index k = 0; k < mesh.numElements(); ++k) {
    for (Index r = 0; r < R; ++r) f[r] = c0(mesh.toPhysical(k, basis.quad2D.point(r)));
    C.segment(k * N, N) = llt.solve(basis.phi2D * basis.quad2D.weights.cwiseProduct(f));
  }
  return C;
}

double evaluate_solution(const Eigen::VectorXd& C, int p, Index k, const Eigen::Vector2d& xhat) {
  const Index N = numElemDofs(p);
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads;
  eval_basis_2d(p, xhat[0], xhat[1], values, grads);
  return C.segment(k * N, N).dot(values);
}

double compute_l2_error(const Mesh& mesh, int p, const Eigen::VectorXd& C, const SpaceTimeField& exact, double t) {
  checkDegree(p);
  const Index N = numElemDofs(p);
  if (C.size() != mesh.numElements() * N)
    throw ConfigError("coefficient vector has " + std::to_string(C.size()) + " entries, expected " +
                      std::to_string(mesh.numElements() * N));
  const QuadRule2D rule = quad_rule_triangle(2 * p + 1);
  Eigen::MatrixXd phi(N, rule.size());
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads;
  for (Index r = 0; r < rule.size(); ++r) {
    eval_basis_2d(p, rule.points(r, 0), rule.points(r, 1), values, grads);
    phi.col(r) = values;
  }

  double sum = 0.0;
  for (Index k = 0; k < mesh.numElements(); ++k) {
    const Eigen::VectorXd ch = phi.transpose() * C.segment(k * N, N);
    double local = 0.0;
    for (Index r = 0; r < rule.size(); ++r) {
      const double d = ch[r] - exact(t, mesh.toPhysical(k, rule.point(r)));
      local += rule.weights[r] * d * d;
    }
    sum += 2.0 * mesh.areaT[k] * local;
  }
  return std::sqrt(sum);
}

Eigen::VectorXd compute_eoc(const Eigen::VectorXd& errors, const Eigen::VectorXd& meshSizes) {
  if (errors.size() != meshSizes.size() || errors.size() < 2)
    throw ConfigError("EOC needs at least two errors with matching mesh sizes");
  if ((errors.array() <= 0.0).any() || (meshSizes.array() <= 0.0).any())
    throw ConfigError("EOC requires positive errors and mesh sizes");
  Eigen::VectorXd eoc(errors.size() - 1);
  for (Index j = 1; j < errors.size(); ++j)
    eoc[j - 1] = std::log(errors[j - 1] / errors[j]) / std::log(meshSizes[j - 1] / meshSizes[j]);
  return eoc;
}

}  // namespace hdg
