#include "hdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hdg/errors.hpp"

namespace hdg {

namespace {

void checkOrder(int order) {
  if (order < 0 || order > kMaxQuadOrder)
    throw ConfigError("unsupported quadrature order " + std::to_string(order) + " (supported: 0.." +
                      std::to_string(kMaxQuadOrder) + ")");
}

int pointsForOrder(int order) { return std::max(1, (order + 2) / 2); }

// Fully symmetric rules on the reference triangle in barycentric orbits.
// Weights are normalized to sum 1 and scaled by |T| = 1/2 on output.
struct SymmetricRuleBuilder {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  void centroid(double w) { add(1.0 / 3.0, 1.0 / 3.0, w); }
  void orbit21(double a, double w) {
    add(a, a, w);
    add(1.0 - 2.0 * a, a, w);
    add(a, 1.0 - 2.0 * a, w);
  }
  void orbit111(double a, double b, double w) {
    const double c = 1.0 - a - b;
    add(a, b, w);
    add(b, a, w);
    add(b, c, w);
    add(c, b, w);
    add(c, a, w);
    add(a, c, w);
  }
  void add(double x, double y, double w) {
    points.emplace_back(x, y);
    weights.push_back(w);
  }

  QuadRule2D build(int order) const {
    QuadRule2D rule;
    rule.order = order;
    const Index n = static_cast<Index>(points.size());
    rule.points.resize(n, 2);
    rule.weights.resize(n);
    for (Index r = 0; r < n; ++r) {
      rule.points.row(r) = points[r].transpose();
      rule.weights[r] = 0.5 * weights[r];
    }
    return rule;
  }
};

// Positive-weight symmetric rules: Strang-Fix for order 3, Dunavant otherwise.
QuadRule2D symmetricTriangleRule(int order) {
  SymmetricRuleBuilder b;
  switch (order) {
    case 0:
    case 1:
      b.centroid(1.0);
      break;
    case 2:
      b.orbit21(1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
      b.orbit111(0.659027622374092, 0.231933368553031, 1.0 / 6.0);
      break;
    case 4:
      b.orbit21(0.445948490915965, 0.223381589678011);
      b.orbit21(0.091576213509771, 0.109951743655322);
      break;
    case 5:
      b.centroid(0.225);
      b.orbit21(0.470142064105115, 0.132394152788506);
      b.orbit21(0.101286507323456, 0.125939180544827);
      break;
    case 6:
      b.orbit21(0.249286745170910, 0.116786275726379);
      b.orbit21(0.063089014491502, 0.050844906370207);
      b.orbit111(0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    case 7:
    case 8:
      b.centroid(0.144315607677787);
      b.orbit21(0.459292588292723, 0.095091634267285);
      b.orbit21(0.170569307751760, 0.103217370534718);
      b.orbit21(0.050547228317031, 0.032458497623198);
      b.orbit111(0.008394777409958, 0.263112829634638, 0.027230314174435);
      break;
    case 9:
      b.centroid(0.097135796282799);
      b.orbit21(0.489682519198738, 0.031334700227139);
      b.orbit21(0.437089591492937, 0.077827541004774);
      b.orbit21(0.188203535619033, 0.079647738927210);
      b.orbit21(0.044729513394453, 0.025577675658698);
      b.orbit111(0.036838412054736, 0.221962989160766, 0.043283539377289);
      break;
    default:
      throw ConfigError("no symmetric rule of order " + std::to_string(order));
  }
  return b.build(order);
}

constexpr int kMaxSymmetricOrder = 9;

}  // namespace

void gauss_jacobi(int numPoints, double a, double b, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const int n = numPoints;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd offDiag(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag[k] = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    offDiag[k - 1] = std::sqrt(beta);
  }
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offDiag, Eigen::ComputeEigenvectors);
  nodes = solver.eigenvalues();
  weights = mu0 * solver.eigenvectors().row(0).transpose().array().square();
}

QuadRule1D quad_rule_1d(int order) {
  checkOrder(order);
  const int n = pointsForOrder(order);
  Eigen::VectorXd x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);

  QuadRule1D rule;
  rule.order = order;
  rule.points = 0.5 * (x.array() + 1.0);
  rule.weights = 0.5 * w;
  // Enforce exact mirror symmetry so reversed tables coincide with s -> 1 - s.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double s = 0.5 * (rule.points[i] + (1.0 - rule.points[j]));
    const double wt = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.points[i] = s;
    rule.points[j] = 1.0 - s;
    rule.weights[i] = rule.weights[j] = wt;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.5;
  return rule;
}

QuadRule2D quad_rule_triangle(int order) {
  checkOrder(order);
  if (order <= kMaxSymmetricOrder) return symmetricTriangleRule(order);
  const int n = pointsForOrder(order);
  Eigen::VectorXd xs, ws, xe, we;
  gauss_jacobi(n, 0.0, 0.0, xs, ws);
  gauss_jacobi(n, 1.0, 0.0, xe, we);

  QuadRule2D rule;
  rule.order = order;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  Index r = 0;
  for (int j = 0; j < n; ++j) {
    const double eta = 0.5 * (xe[j] + 1.0);
    const double wEta = 0.25 * we[j];  // weight (1 - eta) on [0, 1]
    for (int i = 0; i < n; ++i) {
      const double xi = 0.5 * (xs[i] + 1.0);
      rule.points(r, 0) = xi * (1.0 - eta);
      rule.points(r, 1) = eta;
      rule.weights[r] = 0.5 * ws[i] * wEta;
      ++r;
    }
  }
  return rule;
}

}  // namespace hdg
