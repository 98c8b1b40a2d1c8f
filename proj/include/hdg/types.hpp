#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>

namespace hdg {

using Eigen::Index;

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Velocity u(t, x).
using VectorField = std::function<Eigen::Vector2d(double, const Eigen::Vector2d&)>;
/// Scalar coefficient c(t, x).
using SpaceTimeField = std::function<double(double, const Eigen::Vector2d&)>;
/// Time-independent scalar c(x).
using SpaceField = std::function<double(const Eigen::Vector2d&)>;

}  // namespace hdg
