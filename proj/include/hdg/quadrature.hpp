#pragma once

#include <Eigen/Core>

#include "hdg/types.hpp"

namespace hdg {

inline constexpr int kMaxQuadOrder = 40;

/// Gauss-Legendre rule on [0, 1]; points are symmetric about 1/2.
class QuadRule1D {
 public:
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  int order = 0;

  Eigen::Index size() const { return points.size(); }
};

/// Rule on the reference triangle {(0,0),(1,0),(0,1)}: fully symmetric
/// positive-weight rules up to order 9, collapsed (Duffy) Gauss rules above.
class QuadRule2D {
 public:
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  int order = 0;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Vector2d point(Eigen::Index r) const { return points.row(r).transpose(); }
};

/// Exact for polynomials of degree <= order on [0, 1].
QuadRule1D quad_rule_1d(int order);

/// Exact for bivariate polynomials of total degree <= order on the reference triangle.
QuadRule2D quad_rule_triangle(int order);

/// Golub-Welsch nodes and weights on [-1, 1] for the Jacobi weight (1-x)^a (1+x)^b.
void gauss_jacobi(int numPoints, double a, double b, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace hdg
