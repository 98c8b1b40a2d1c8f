#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"
#include "hdg/types.hpp"

namespace hdg {

inline constexpr int kMaxDegree = 4;

/// Number of 2D basis functions of degree <= p.
constexpr int numElemDofs(int p) { return (p + 1) * (p + 2) / 2; }
/// Number of 1D basis functions of degree <= p.
constexpr int numEdgeDofs(int p) { return p + 1; }

inline void checkDegree(int p) {
  if (p < 0 || p > kMaxDegree)
    throw ConfigError("polynomial degree " + std::to_string(p) + " outside supported range 0.." +
                      std::to_string(kMaxDegree));
}

/// Orthonormal Legendre polynomials on [0, 1], truncated to p + 1 entries.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval_basis_1d(int p, Scalar s) {
  checkDegree(p);
  using std::sqrt;
  Eigen::Matrix<Scalar, 5, 1> all;
  all[0] = Scalar(1);
  all[1] = sqrt(Scalar(3)) * (Scalar(1) - Scalar(2) * s);
  all[2] = sqrt(Scalar(5)) * (Scalar(1) - Scalar(6) * s + Scalar(6) * s * s);
  all[3] = sqrt(Scalar(7)) * (Scalar(-1) + Scalar(12) * s - Scalar(30) * s * s + Scalar(20) * s * s * s);
  all[4] = Scalar(3) * (Scalar(1) - Scalar(20) * s + Scalar(90) * s * s - Scalar(140) * s * s * s +
                        Scalar(70) * s * s * s * s);
  return all.head(numEdgeDofs(p));
}

/// Values and reference gradients of the orthonormal hierarchical basis on the
/// reference triangle {(0,0),(1,0),(0,1)}.
///
/// Function (a, b) with a + b = d sits at index d(d+1)/2 + a and equals
///   sqrt((2a+1)(2d+2)) * Q_a(x) * P_b^{(2a+1,0)}(2 x2 - 1),
/// where Q_a = P_a(2 x1/(1-x2) - 1) (1-x2)^a is generated by a three-term
/// recurrence that stays polynomial (no division at the top vertex).
template <typename Scalar>
void eval_basis_2d(int p, Scalar x1, Scalar x2, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values,
                   Eigen::Matrix<Scalar, Eigen::Dynamic, 2>& gradients) {
  checkDegree(p);
  using std::sqrt;
  const int n = numElemDofs(p);
  values.resize(n);
  gradients.resize(n, 2);

  // Collapsed Legendre factor and its gradient.
  std::array<Scalar, kMaxDegree + 1> q{}, qx{}, qy{};
  const Scalar s = Scalar(2) * x1 + x2 - Scalar(1);
  const Scalar t = (Scalar(1) - x2) * (Scalar(1) - x2);
  const Scalar ty = Scalar(-2) * (Scalar(1) - x2);
  q[0] = Scalar(1);
  if (p >= 1) {
    q[1] = s;
    qx[1] = Scalar(2);
    qy[1] = Scalar(1);
  }
  for (int m = 1; m < p; ++m) {
    const Scalar c1 = Scalar(2 * m + 1) / Scalar(m + 1);
    const Scalar c2 = Scalar(m) / Scalar(m + 1);
    q[m + 1] = c1 * s * q[m] - c2 * t * q[m - 1];
    qx[m + 1] = c1 * (Scalar(2) * q[m] + s * qx[m]) - c2 * t * qx[m - 1];
    qy[m + 1] = c1 * (q[m] + s * qy[m]) - c2 * (ty * q[m - 1] + t * qy[m - 1]);
  }

  const Scalar z = Scalar(2) * x2 - Scalar(1);
  for (int a = 0; a <= p; ++a) {
    // Jacobi P_b^{(alpha,0)}(z) and d/dz for b = 0 .. p - a.
    const Scalar alpha = Scalar(2 * a + 1);
    std::array<Scalar, kMaxDegree + 1> jac{}, djac{};
    jac[0] = Scalar(1);
    if (p - a >= 1) {
      jac[1] = ((alpha + Scalar(2)) * z + alpha) / Scalar(2);
      djac[1] = (alpha + Scalar(2)) / Scalar(2);
    }
    for (int b = 1; b < p - a; ++b) {
      const Scalar bb = Scalar(b);
      const Scalar k = Scalar(2) * bb + alpha;
      const Scalar denom = Scalar(2) * (bb + Scalar(1)) * (bb + alpha + Scalar(1)) * k;
      const Scalar lin = (k + Scalar(1)) * (k + Scalar(2)) * k;
      const Scalar cst = (k + Scalar(1)) * alpha * alpha;
      const Scalar prev = Scalar(2) * (bb + alpha) * bb * (k + Scalar(2));
      jac[b + 1] = ((lin * z + cst) * jac[b] - prev * jac[b - 1]) / denom;
      djac[b + 1] = (lin * jac[b] + (lin * z + cst) * djac[b] - prev * djac[b - 1]) / denom;
    }
    for (int b = 0; a + b <= p; ++b) {
      const int d = a + b;
      const int idx = d * (d + 1) / 2 + a;
      const Scalar c = sqrt(Scalar((2 * a + 1) * (2 * d + 2)));
      values[idx] = c * q[a] * jac[b];
      gradients(idx, 0) = c * qx[a] * jac[b];
      gradients(idx, 1) = c * (qy[a] * jac[b] + q[a] * Scalar(2) * djac[b]);
    }
  }
}

/// Reference edge parameterization gamma_n : [0,1] -> edge n of the reference
/// triangle (edge n is opposite vertex n, traversed counterclockwise).
inline Eigen::Vector2d map_ref_edge(int n, double s) {
  switch (n) {
    case 0: return {1.0 - s, s};
    case 1: return {0.0, 1.0 - s};
    case 2: return {s, 0.0};
    default: throw ConfigError("reference edge index must be 0, 1 or 2");
  }
}

/// Basis functions tabulated at the quadrature points used by the assembly.
struct BasisSet {
  int p = 0;
  int N = 0;
  int Nbar = 0;
  QuadRule2D quad2D;
  QuadRule1D quad1D;

  Eigen::MatrixXd phi2D;                       ///< N x R2
  std::array<Eigen::MatrixXd, 2> gradPhi2D;    ///< [m] N x R2, reference derivatives
  std::array<Eigen::MatrixXd, 3> phi1D;        ///< [n] N x R1, traces phi o gamma_n
  Eigen::MatrixXd mu;                          ///< Nbar x R1
  std::array<Eigen::MatrixXd, 2> thetaMu;      ///< [l] Nbar x R1, mu o beta_l (l=0 identity, l=1 reversed)
};

/// Tabulates all bases with rules of the given order (default 2p + 1).
BasisSet compute_bases_on_quad(int p, int quadOrder = -1);

/// Pre-integrated reference tensors.
struct ReferenceBlocks {
  Eigen::MatrixXd massPhi;  ///< N x N, reference 2D mass
  Eigen::MatrixXd massMu;   ///< Nbar x Nbar
  /// [n][l] N x Nbar: int_0^1 phi_i(gamma_n(s)) mu_j(beta_l(s)) ds
  std::array<std::array<Eigen::MatrixXd, 2>, 3> edgePhiIntMu;
  /// [n][l][r] N x Nbar: w_r phi_i(gamma_n(q_r)) mu_j(beta_l(q_r))
  std::array<std::array<std::vector<Eigen::MatrixXd>, 2>, 3> edgePhiIntMuPerQuad;
  /// [m][r] N x N: w_r d_m phi_i(q_r) phi_j(q_r)
  std::array<std::vector<Eigen::MatrixXd>, 2> elemDphiPhiPerQuad;
  /// [n] N x N: int_0^1 phi_i(gamma_n(s)) phi_j(gamma_n(s)) ds
  std::array<Eigen::MatrixXd, 3> edgePhiIntPhiInt;
};

ReferenceBlocks integrate_reference_blocks(const BasisSet& basis);

}  // namespace hdg
