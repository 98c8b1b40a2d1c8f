#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hdg/basis.hpp"
#include "hdg/mesh.hpp"
#include "hdg/types.hpp"

namespace hdg {

/// Values at the 1D quadrature points of every element-local edge, [k][n](r),
/// in the element's own edge parameterization.
using EdgeQuadValues = std::vector<std::array<Eigen::VectorXd, 3>>;

/// Block-diagonal element mass matrix, block k = 2|T_k| * reference mass.
SparseMatrix assemble_mass_phi(const Mesh& mesh, const ReferenceBlocks& ref);

/// G^1, G^2 with blocks int_T u^m phi_j d_m phi_i, velocity sampled at the
/// physical images of the element quadrature points.
std::array<SparseMatrix, 2> assemble_advection_elem(const Mesh& mesh, const BasisSet& basis,
                                                    const ReferenceBlocks& ref, const VectorField& velocity,
                                                    double t);

/// u(t, F_k(gamma_n(q_r))) . nu_kn.
EdgeQuadValues eval_normal_velocity(const Mesh& mesh, const BasisSet& basis, const VectorField& velocity,
                                    double t);

/// f(t, F_k(gamma_n(q_r))) for every (k, n, r).
EdgeQuadValues eval_on_quad_edge(const Mesh& mesh, const BasisSet& basis, const SpaceTimeField& f, double t);

/// KN x KbarNbar: |E_kn| sum_r values[k][n](r) S_hat[n][l][r] at (k, rho(k,n)).
SparseMatrix assemble_mat_edge_phi_int_mu_val(const Mesh& mesh, const EdgeMask& mask,
                                              const ReferenceBlocks& ref, const EdgeQuadValues& values);

/// KN x KbarNbar: |E_kn| R_hat_mu[n][l] at (k, rho(k,n)).
SparseMatrix assemble_mat_edge_phi_int_mu(const Mesh& mesh, const EdgeMask& mask, const ReferenceBlocks& ref);

/// KbarNbar x KbarNbar block-diagonal edge mass over the masked incidences.
SparseMatrix assemble_mat_edge_mu_mu(const Mesh& mesh, const EdgeMask& mask, const ReferenceBlocks& ref);

/// KN x KN block-diagonal sum of element-trace mass over interior edges.
SparseMatrix assemble_mat_edge_phi_phi_interior(const Mesh& mesh, const ReferenceBlocks& ref);

/// KbarNbar: |E| sum_r w_r values[k][n](r) mu_i(q_r) over masked (boundary) edges.
Eigen::VectorXd assemble_vec_edge_mu_val(const Mesh& mesh, const EdgeMask& mask, const BasisSet& basis,
                                         const EdgeQuadValues& values);

/// K_mu,in from a Dirichlet closure evaluated at time t.
Eigen::VectorXd assemble_vec_edge_mu_func_cont(const Mesh& mesh, const EdgeMask& inflow, const BasisSet& basis,
                                               const SpaceTimeField& cD, double t);

/// KN: |E_kn| sum_r w_r values[k][n](r) phi_i(gamma_n(q_r)) over masked edges.
Eigen::VectorXd assemble_vec_edge_phi_int_val(const Mesh& mesh, const EdgeMask& mask, const BasisSet& basis,
                                              const EdgeQuadValues& values);

/// KN: int_T xi(t) phi_i.
Eigen::VectorXd assemble_vec_source(const Mesh& mesh, const BasisSet& basis, const SpaceTimeField& source,
                                    double t);

/// Largest |u . nu| over all edge quadrature points at time t.
double max_normal_velocity(const Mesh& mesh, const BasisSet& basis, const VectorField& velocity, double t);

/// Blocks that depend only on mesh and basis.
struct TimeIndependentBlocks {
  SparseMatrix Mphi;      ///< KN x KN
  SparseMatrix Rphi;      ///< KN x KN
  SparseMatrix Rmu;       ///< KN x KbarNbar
  SparseMatrix T;         ///< KbarNbar x KN, equals Rmu^T
  SparseMatrix MmuBar;    ///< interior edge mass (each interior edge counted twice)
  SparseMatrix MmuTilde;  ///< boundary edge mass
};

/// Blocks rebuilt at every stage time.
struct TimeDependentBlocks {
  double t = 0.0;
  BoundaryMasks masks;
  SparseMatrix G1, G2;
  SparseMatrix S;        ///< S + S_out (interior and outflow edges)
  SparseMatrix KmuOut;   ///< KbarNbar x KN
  Eigen::VectorXd FphiIn;
  Eigen::VectorXd KmuIn;
  Eigen::VectorXd H;
};

/// The coupled system
///   Lbar C + Mbar Lambda = Bphi,   N C + P Lambda = Bmu.
struct CompositeBlocks {
  SparseMatrix Lbar, Mbar, N, P;
  Eigen::VectorXd Bphi, Bmu;
};

struct SystemBlocks {
  double alpha = 0.0;
  TimeIndependentBlocks fixed;
  TimeDependentBlocks current;

  CompositeBlocks compose() const;
};

TimeIndependentBlocks assemble_time_independent(const Mesh& mesh, const ReferenceBlocks& ref);

TimeDependentBlocks assemble_time_dependent(const Mesh& mesh, const BasisSet& basis, const ReferenceBlocks& ref,
                                            const VectorField& velocity, const SpaceTimeField& cD,
                                            const SpaceTimeField& source, double t);

}  // namespace hdg
