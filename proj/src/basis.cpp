#include "hdg/basis.hpp"

namespace hdg {

BasisSet compute_bases_on_quad(int p, int quadOrder) {
  checkDegree(p);
  if (quadOrder < 0) quadOrder = 2 * p + 1;

  BasisSet b;
  b.p = p;
  b.N = numElemDofs(p);
  b.Nbar = numEdgeDofs(p);
  b.quad2D = quad_rule_triangle(quadOrder);
  b.quad1D = quad_rule_1d(quadOrder);

  const Index R2 = b.quad2D.size();
  const Index R1 = b.quad1D.size();

  b.phi2D.resize(b.N, R2);
  b.gradPhi2D[0].resize(b.N, R2);
  b.gradPhi2D[1].resize(b.N, R2);
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads;
  for (Index r = 0; r < R2; ++r) {
    eval_basis_2d(p, b.quad2D.points(r, 0), b.quad2D.points(r, 1), values, grads);
    b.phi2D.col(r) = values;
    b.gradPhi2D[0].col(r) = grads.col(0);
    b.gradPhi2D[1].col(r) = grads.col(1);
  }

  for (int n = 0; n < 3; ++n) {
    b.phi1D[n].resize(b.N, R1);
    for (Index r = 0; r < R1; ++r) {
      const Eigen::Vector2d x = map_ref_edge(n, b.quad1D.points[r]);
      eval_basis_2d(p, x[0], x[1], values, grads);
      b.phi1D[n].col(r) = values;
    }
  }

  b.mu.resize(b.Nbar, R1);
  for (Index r = 0; r < R1; ++r) b.mu.col(r) = eval_basis_1d(p, b.quad1D.points[r]);
  b.thetaMu[0] = b.mu;
  // The 1D rule is mirror-symmetric, so mu(1 - q_r) is the column-reversed table.
  b.thetaMu[1] = b.mu.rowwise().reverse();
  return b;
}

ReferenceBlocks integrate_reference_blocks(const BasisSet& b) {
  ReferenceBlocks ref;
  const auto& w2 = b.quad2D.weights;
  const auto& w1 = b.quad1D.weights;
  const Index R2 = b.quad2D.size();
  const Index R1 = b.quad1D.size();

  ref.massPhi = b.phi2D * w2.asDiagonal() * b.phi2D.transpose();
  ref.massMu = b.mu * w1.asDiagonal() * b.mu.transpose();

  for (int n = 0; n < 3; ++n) {
    ref.edgePhiIntPhiInt[n] = b.phi1D[n] * w1.asDiagonal() * b.phi1D[n].transpose();
    for (int l = 0; l < 2; ++l) {
      auto& perQuad = ref.edgePhiIntMuPerQuad[n][l];
      perQuad.resize(R1);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(b.N, b.Nbar);
      for (Index r = 0; r < R1; ++r) {
        perQuad[r] = w1[r] * b.phi1D[n].col(r) * b.thetaMu[l].col(r).transpose();
        sum += perQuad[r];
      }
      ref.edgePhiIntMu[n][l] = sum;
    }
  }

  for (int m = 0; m < 2; ++m) {
    ref.elemDphiPhiPerQuad[m].resize(R2);
    for (Index r = 0; r < R2; ++r)
      ref.elemDphiPhiPerQuad[m][r] = w2[r] * b.gradPhi2D[m].col(r) * b.phi2D.col(r).transpose();
  }
  return ref;
}

}  // namespace hdg
