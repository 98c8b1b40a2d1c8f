#include "hdg/timestepping.hpp"

#include <cmath>
#include <string>

#include "hdg/errors.hpp"

namespace hdg {

DirkTableau dirk_tableau(int order) {
  DirkTableau tab;
  tab.order = order;
  switch (order) {
    case 1:
      tab.stages = 1;
      tab.A.resize(1, 1);
      tab.A << 1.0;
      break;
    case 2: {
      const double g = 1.0 - std::sqrt(2.0) / 2.0;
      tab.stages = 2;
      tab.A.resize(2, 2);
      tab.A << g, 0.0,
               1.0 - g, g;
      break;
    }
    case 3: {
      // gamma is the middle root of g^3 - 3g^2 + 3g/2 - 1/6.
      const double g = 0.435866521508458999416019;
      const double tau = 0.5 * (1.0 + g);
      const double b1 = -0.25 * (6.0 * g * g - 16.0 * g + 1.0);
      const double b2 = 0.25 * (6.0 * g * g - 20.0 * g + 5.0);
      tab.stages = 3;
      tab.A.resize(3, 3);
      tab.A << g, 0.0, 0.0,
               tau - g, g, 0.0,
               b1, b2, g;
      break;
    }
    case 4:
      tab.stages = 5;
      tab.A.resize(5, 5);
      tab.A << 1.0 / 4, 0.0, 0.0, 0.0, 0.0,
               1.0 / 2, 1.0 / 4, 0.0, 0.0, 0.0,
               17.0 / 50, -1.0 / 25, 1.0 / 4, 0.0, 0.0,
               371.0 / 1360, -137.0 / 2720, 15.0 / 544, 1.0 / 4, 0.0,
               25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 1.0 / 4;
      break;
    default:
      throw ConfigError("DIRK order " + std::to_string(order) + " not supported (expected 1..4)");
  }
  tab.b = tab.A.row(tab.stages - 1).transpose();
  tab.c = tab.A.rowwise().sum();
  tab.c[tab.stages - 1] = 1.0;
  return tab;
}

double resolve_alpha(const Mesh& mesh, const BasisSet& basis, const ProblemDefinition& problem) {
  if (problem.alpha) {
    if (!(*problem.alpha > 0.0)) throw ConfigError("penalty alpha must be positive");
    return *problem.alpha;
  }
  const double a = max_normal_velocity(mesh, basis, problem.velocity, 0.0);
  if (!(a > 0.0))
    throw ConfigError("automatic penalty is zero because u . nu vanishes at t = 0; set alpha explicitly");
  return a;
}

Discretization make_discretization(Mesh mesh, int p, const ProblemDefinition& problem) {
  Discretization disc{std::move(mesh), compute_bases_on_quad(p), {}, {}};
  disc.ref = integrate_reference_blocks(disc.basis);
  disc.blocks.alpha = resolve_alpha(disc.mesh, disc.basis, problem);
  disc.blocks.fixed = assemble_time_independent(disc.mesh, disc.ref);
  return disc;
}

StageSystem steady_system(Discretization& disc, const ProblemDefinition& problem, double t) {
  disc.blocks.current =
      assemble_time_dependent(disc.mesh, disc.basis, disc.ref, problem.velocity, problem.cD, problem.source, t);
  CompositeBlocks comp = disc.blocks.compose();
  return {std::move(comp.Lbar), std::move(comp.Mbar), std::move(comp.N), std::move(comp.P),
          std::move(comp.Bphi), std::move(comp.Bmu)};
}

CondensedSolution solve_steady(Discretization& disc, const ProblemDefinition& problem,
                               CondensationSolver& solver) {
  return solver.solve(steady_system(disc, problem, 0.0));
}

namespace {

std::string stagePrefix(int stage, double t) {
  return "stage " + std::to_string(stage + 1) + " at t = " + std::to_string(t) + ": ";
}

}  // namespace

TimeState dirk_step(const TimeState& state, Discretization& disc, const ProblemDefinition& problem,
                    const DirkTableau& tableau, double dt, CondensationSolver& solver) {
  return dirk_step(state, disc, problem, tableau, dt, [&solver](const StageSystem& sys) { return solver.solve(sys); });
}

TimeState dirk_step(const TimeState& state, Discretization& disc, const ProblemDefinition& problem,
                    const DirkTableau& tableau, double dt, const StageSolver& solve) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const SparseMatrix& Mphi = disc.blocks.fixed.Mphi;
  const Eigen::VectorXd MC = Mphi * state.C;

  TimeState next;
  next.stageResiduals.reserve(tableau.stages);
  for (int i = 0; i < tableau.stages; ++i) {
    const double ti = state.t + tableau.c[i] * dt;
    const double aii = tableau.A(i, i);
    disc.blocks.current =
        assemble_time_dependent(disc.mesh, disc.basis, disc.ref, problem.velocity, problem.cD, problem.source, ti);
    CompositeBlocks comp = disc.blocks.compose();

    StageSystem sys;
    sys.L = Mphi + (aii * dt) * comp.Lbar;
    sys.M = (aii * dt) * comp.Mbar;
    sys.Q = MC + (aii * dt) * comp.Bphi;
    for (int j = 0; j < i; ++j) sys.Q += (dt * tableau.A(i, j)) * next.stageResiduals[j];
    sys.N = std::move(comp.N);
    sys.P = std::move(comp.P);
    sys.Bmu = std::move(comp.Bmu);

    CondensedSolution sol;
    try {
      sol = solve(sys);
    } catch (const SingularBlockError& e) {
      throw SingularBlockError(e.element(), stagePrefix(i, ti) + e.what());
    } catch (const SchurSolveError& e) {
      throw SchurSolveError(stagePrefix(i, ti) + e.what());
    }
    next.stageResiduals.push_back(comp.Bphi - comp.Lbar * sol.C - comp.Mbar * sol.Lambda);
    next.C = std::move(sol.C);
    next.Lambda = std::move(sol.Lambda);
  }
  next.t = state.t + dt;
  next.step = state.step + 1;
  return next;
}

}  // namespace hdg
