#include "hdg/assembly.hpp"

#include <cmath>

namespace hdg {

namespace {

void addBlock(std::vector<Triplet>& triplets, Index row0, Index col0, const Eigen::MatrixXd& block) {
  for (Index j = 0; j < block.cols(); ++j)
    for (Index i = 0; i < block.rows(); ++i)
      if (block(i, j) != 0.0) triplets.emplace_back(row0 + i, col0 + j, block(i, j));
}

SparseMatrix fromTriplets(Index rows, Index cols, const std::vector<Triplet>& triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Index elemDofs(const ReferenceBlocks& ref) { return ref.massPhi.rows(); }
Index edgeDofs(const ReferenceBlocks& ref) { return ref.massMu.rows(); }

}  // namespace

SparseMatrix assemble_mass_phi(const Mesh& mesh, const ReferenceBlocks& ref) {
  const Index K = mesh.numElements();
  const Index N = elemDofs(ref);
  std::vector<Triplet> triplets;
  triplets.reserve(K * N * N);
  for (Index k = 0; k < K; ++k) addBlock(triplets, k * N, k * N, 2.0 * mesh.areaT[k] * ref.massPhi);
  return fromTriplets(K * N, K * N, triplets);
}

std::array<SparseMatrix, 2> assemble_advection_elem(const Mesh& mesh, const BasisSet& basis,
                                                    const ReferenceBlocks& ref, const VectorField& velocity,
                                                    double t) {
  const Index K = mesh.numElements();
  const Index N = basis.N;
  const Index R = basis.quad2D.size();
  std::array<std::vector<Triplet>, 2> triplets;
  triplets[0].reserve(K * N * N);
  triplets[1].reserve(K * N * N);
  Eigen::MatrixXd g1(N, N), g2(N, N);
  for (Index k = 0; k < K; ++k) {
    const Eigen::Matrix2d& B = mesh.jacobians[k];
    g1.setZero();
    g2.setZero();
    for (Index r = 0; r < R; ++r) {
      const Eigen::Vector2d u = velocity(t, mesh.toPhysical(k, basis.quad2D.point(r)));
      const auto& dx1 = ref.elemDphiPhiPerQuad[0][r];
      const auto& dx2 = ref.elemDphiPhiPerQuad[1][r];
      // Chain rule: grad = B^{-T} grad_ref, the 1/(2|T_k|) cancels the area scaling.
      g1 += u[0] * (B(1, 1) * dx1 - B(1, 0) * dx2);
      g2 += u[1] * (-B(0, 1) * dx1 + B(0, 0) * dx2);
    }
    addBlock(triplets[0], k * N, k * N, g1);
    addBlock(triplets[1], k * N, k * N, g2);
  }
  return {fromTriplets(K * N, K * N, triplets[0]), fromTriplets(K * N, K * N, triplets[1])};
}

EdgeQuadValues eval_on_quad_edge(const Mesh& mesh, const BasisSet& basis, const SpaceTimeField& f, double t) {
  const Index R = basis.quad1D.size();
  EdgeQuadValues out(mesh.numElements());
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      out[k][n].resize(R);
      for (Index r = 0; r < R; ++r)
        out[k][n][r] = f(t, mesh.toPhysical(k, map_ref_edge(n, basis.quad1D.points[r])));
    }
  return out;
}

EdgeQuadValues eval_normal_velocity(const Mesh& mesh, const BasisSet& basis, const VectorField& velocity,
                                    double t) {
  const Index R = basis.quad1D.size();
  EdgeQuadValues out(mesh.numElements());
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      out[k][n].resize(R);
      for (Index r = 0; r < R; ++r) {
        const Eigen::Vector2d x = mesh.toPhysical(k, map_ref_edge(n, basis.quad1D.points[r]));
        out[k][n][r] = velocity(t, x).dot(mesh.normals[k][n]);
      }
    }
  return out;
}

double max_normal_velocity(const Mesh& mesh, const BasisSet& basis, const VectorField& velocity, double t) {
  double m = 0.0;
  for (const auto& elem : eval_normal_velocity(mesh, basis, velocity, t))
    for (const auto& edge : elem) m = std::max(m, edge.cwiseAbs().maxCoeff());
  return m;
}

SparseMatrix assemble_mat_edge_phi_int_mu_val(const Mesh& mesh, const EdgeMask& mask,
                                              const ReferenceBlocks& ref, const EdgeQuadValues& values) {
  const Index K = mesh.numElements();
  const Index N = elemDofs(ref), Nbar = edgeDofs(ref);
  std::vector<Triplet> triplets;
  triplets.reserve(mask.count() * N * Nbar);
  Eigen::MatrixXd block(N, Nbar);
  for (Index k = 0; k < K; ++k)
    for (int n = 0; n < 3; ++n) {
      if (!mask(k, n)) continue;
      const int l = mesh.sideOfElem(k, n);
      const auto& perQuad = ref.edgePhiIntMuPerQuad[n][l];
      block.setZero();
      for (std::size_t r = 0; r < perQuad.size(); ++r) block += values[k][n][r] * perQuad[r];
      addBlock(triplets, k * N, mesh.edgeOfElem(k, n) * Nbar, mesh.edgeLength(k, n) * block);
    }
  return fromTriplets(K * N, mesh.numEdges() * Nbar, triplets);
}

SparseMatrix assemble_mat_edge_phi_int_mu(const Mesh& mesh, const EdgeMask& mask, const ReferenceBlocks& ref) {
  const Index K = mesh.numElements();
  const Index N = elemDofs(ref), Nbar = edgeDofs(ref);
  std::vector<Triplet> triplets;
  triplets.reserve(mask.count() * N * Nbar);
  for (Index k = 0; k < K; ++k)
    for (int n = 0; n < 3; ++n) {
      if (!mask(k, n)) continue;
      const int l = mesh.sideOfElem(k, n);
      addBlock(triplets, k * N, mesh.edgeOfElem(k, n) * Nbar, mesh.edgeLength(k, n) * ref.edgePhiIntMu[n][l]);
    }
  return fromTriplets(K * N, mesh.numEdges() * Nbar, triplets);
}

SparseMatrix assemble_mat_edge_mu_mu(const Mesh& mesh, const EdgeMask& mask, const ReferenceBlocks& ref) {
  const Index Nbar = edgeDofs(ref);
  std::vector<Triplet> triplets;
  triplets.reserve(mask.count() * Nbar * Nbar);
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      if (!mask(k, n)) continue;
      const Index e = mesh.edgeOfElem(k, n);
      addBlock(triplets, e * Nbar, e * Nbar, mesh.edgeLength(k, n) * ref.massMu);
    }
  return fromTriplets(mesh.numEdges() * Nbar, mesh.numEdges() * Nbar, triplets);
}

SparseMatrix assemble_mat_edge_phi_phi_interior(const Mesh& mesh, const ReferenceBlocks& ref) {
  const Index K = mesh.numElements();
  const Index N = elemDofs(ref);
  std::vector<Triplet> triplets;
  triplets.reserve(K * N * N);
  Eigen::MatrixXd block(N, N);
  for (Index k = 0; k < K; ++k) {
    block.setZero();
    for (int n = 0; n < 3; ++n)
      if (mesh.isInterior(k, n)) block += mesh.edgeLength(k, n) * ref.edgePhiIntPhiInt[n];
    addBlock(triplets, k * N, k * N, block);
  }
  return fromTriplets(K * N, K * N, triplets);
}

Eigen::VectorXd assemble_vec_edge_mu_val(const Mesh& mesh, const EdgeMask& mask, const BasisSet& basis,
                                         const EdgeQuadValues& values) {
  const Index Nbar = basis.Nbar;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.numEdges() * Nbar);
  const Eigen::VectorXd& w = basis.quad1D.weights;
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      if (!mask(k, n)) continue;
      // Boundary edges are always traversed in their inner element's direction.
      const Index e = mesh.edgeOfElem(k, n);
      const auto& mu = basis.thetaMu[mesh.sideOfElem(k, n)];
      out.segment(e * Nbar, Nbar) += mesh.edgeLength(k, n) * (mu * w.cwiseProduct(values[k][n]));
    }
  return out;
}

Eigen::VectorXd assemble_vec_edge_mu_func_cont(const Mesh& mesh, const EdgeMask& inflow, const BasisSet& basis,
                                               const SpaceTimeField& cD, double t) {
  return assemble_vec_edge_mu_val(mesh, inflow, basis, eval_on_quad_edge(mesh, basis, cD, t));
}

Eigen::VectorXd assemble_vec_edge_phi_int_val(const Mesh& mesh, const EdgeMask& mask, const BasisSet& basis,
                                              const EdgeQuadValues& values) {
  const Index N = basis.N;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.numElements() * N);
  const Eigen::VectorXd& w = basis.quad1D.weights;
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      if (!mask(k, n)) continue;
      out.segment(k * N, N) += mesh.edgeLength(k, n) * (basis.phi1D[n] * w.cwiseProduct(values[k][n]));
    }
  return out;
}

Eigen::VectorXd assemble_vec_source(const Mesh& mesh, const BasisSet& basis, const SpaceTimeField& source,
                                    double t) {
  const Index N = basis.N;
  const Index R = basis.quad2D.size();
  Eigen::VectorXd out(mesh.numElements() * N);
  Eigen::VectorXd f(R);
  for (Index k = 0; k < mesh.numElements(); ++k) {
    for (Index r = 0; r < R; ++r) f[r] = source(t, mesh.toPhysical(k, basis.quad2D.point(r)));
    out.segment(k * N, N) = 2.0 * mesh.areaT[k] * (basis.phi2D * basis.quad2D.weights.cwiseProduct(f));
  }
  return out;
}

TimeIndependentBlocks assemble_time_independent(const Mesh& mesh, const ReferenceBlocks& ref) {
  const EdgeMask interior = interiorMask(mesh);
  TimeIndependentBlocks b;
  b.Mphi = assemble_mass_phi(mesh, ref);
  b.Rphi = assemble_mat_edge_phi_phi_interior(mesh, ref);
  b.Rmu = assemble_mat_edge_phi_int_mu(mesh, interior, ref);
  b.T = b.Rmu.transpose();
  b.MmuBar = assemble_mat_edge_mu_mu(mesh, interior, ref);
  b.MmuTilde = assemble_mat_edge_mu_mu(mesh, exteriorMask(mesh), ref);
  return b;
}

TimeDependentBlocks assemble_time_dependent(const Mesh& mesh, const BasisSet& basis, const ReferenceBlocks& ref,
                                            const VectorField& velocity, const SpaceTimeField& cD,
                                            const SpaceTimeField& source, double t) {
  TimeDependentBlocks b;
  b.t = t;
  const EdgeQuadValues unu = eval_normal_velocity(mesh, basis, velocity, t);
  b.masks = classify_boundary_edges(mesh, unu);

  auto g = assemble_advection_elem(mesh, basis, ref, velocity, t);
  b.G1 = std::move(g[0]);
  b.G2 = std::move(g[1]);
  b.S = assemble_mat_edge_phi_int_mu_val(mesh, interiorMask(mesh) | b.masks.outflow, ref, unu);
  b.KmuOut = assemble_mat_edge_phi_int_mu(mesh, b.masks.outflow, ref).transpose();

  // Dirichlet data is sampled once and shared by both boundary vectors.
  EdgeQuadValues cDvals = eval_on_quad_edge(mesh, basis, cD, t);
  b.KmuIn = assemble_vec_edge_mu_val(mesh, b.masks.inflow, basis, cDvals);
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) cDvals[k][n] = cDvals[k][n].cwiseProduct(unu[k][n]);
  b.FphiIn = assemble_vec_edge_phi_int_val(mesh, b.masks.inflow, basis, cDvals);
  b.H = assemble_vec_source(mesh, basis, source, t);
  return b;
}

CompositeBlocks SystemBlocks::compose() const {
  CompositeBlocks c;
  c.Lbar = -current.G1 - current.G2 + alpha * fixed.Rphi;
  c.Mbar = current.S - alpha * fixed.Rmu;
  c.N = -alpha * fixed.T - current.KmuOut;
  c.P = alpha * fixed.MmuBar + fixed.MmuTilde;
  c.Bphi = current.H - current.FphiIn;
  // The inflow trace equation reads int mu (lambda - c_D) = 0, so K_mu,in enters with a plus sign.
  c.Bmu = current.KmuIn;
  return c;
}

}  // namespace hdg
