#include "hdg/driver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"
#include "hdg/timestepping.hpp"

namespace hdg {

namespace {

// Runs fn and re-raises any library error with the phase name prepended,
// keeping the error category intact.
template <typename Fn>
auto inPhase(const char* phase, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string(phase) + ": ";
  try {
    return fn();
  } catch (const SingularBlockError& e) {
    throw SingularBlockError(e.element(), prefix + e.what());
  } catch (const SchurSolveError& e) {
    throw SchurSolveError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const MeshError& e) {
    throw MeshError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  }
}

std::string vtkPath(const RunConfig& cfg, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%06d.vtk", step);
  return (std::filesystem::path(cfg.outDir) / (cfg.testcase + buf)).string();
}

}  // namespace

ResolvedRun configure(const RunConfig& cfg) {
  cfg.validate();
  ResolvedRun rr;
  rr.problem = builtin_testcase(cfg.testcase);
  ProblemDefinition& pd = rr.problem;
  if (cfg.p) pd.p = *cfg.p;
  if (cfg.alphaAuto) pd.alpha.reset();
  if (cfg.alpha) pd.alpha = cfg.alpha;
  if (cfg.level) pd.level = *cfg.level;
  if (cfg.tEnd) pd.tEnd = *cfg.tEnd;

  if (cfg.dirkOrder)
    pd.dirkOrder = *cfg.dirkOrder;
  else if (pd.name != "solid_body")
    pd.dirkOrder = std::min(pd.p + 1, 4);

  if (!cfg.meshPath.empty()) {
    rr.mesh = read_mesh_file(cfg.meshPath);
    rr.h = std::sqrt(2.0 * rr.mesh.areaT.maxCoeff());
  } else {
    int cells = 0;
    if (cfg.cells)
      cells = *cfg.cells;
    else if (pd.level >= 0)
      cells = cells_for_level(pd.level);
    else
      cells = 64;
    rr.mesh = generate_structured_mesh(cells, pd.domain);
    rr.h = 1.0 / cells;
  }

  if (!pd.steady) {
    if (cfg.steps) {
      pd.numSteps = *cfg.steps;
    } else if (cfg.dt) {
      pd.numSteps = std::max(1, static_cast<int>(std::lround(pd.tEnd / *cfg.dt)));
      if (std::abs(pd.numSteps * *cfg.dt - pd.tEnd) > 1e-9 * std::max(1.0, pd.tEnd))
        throw ConfigError("dt does not divide t-end into whole steps");
    } else if (pd.name == "unsteady_pde") {
      // Time step tied to the mesh level: dt_j = 1/(5 * 2^j).
      pd.numSteps = static_cast<int>(std::lround(pd.tEnd * 5.0 * (1 << pd.level)));
    }
    if (pd.tEnd > 0.0 && pd.numSteps < 1) throw ConfigError("unsteady run needs at least one step");
    rr.steps = pd.tEnd > 0.0 ? pd.numSteps : 0;
    rr.dt = rr.steps > 0 ? pd.tEnd / rr.steps : 0.0;
  }

  const Index N = numElemDofs(pd.p);
  rr.blockSize = cfg.blockSize ? *cfg.blockSize : default_block_size(pd.p, N);
  if (rr.blockSize % N != 0)
    throw ConfigError("block-size " + std::to_string(rr.blockSize) + " must be a multiple of N = " +
                      std::to_string(N));
  return rr;
}

std::pair<double, double> solution_range(const Mesh& mesh, int p, const Eigen::VectorXd& C) {
  const Index N = numElemDofs(p);
  const QuadRule2D rule = quad_rule_triangle(2 * p + 1);
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts(rule.size() + 3, 2);
  pts.topRows(rule.size()) = rule.points;
  pts.bottomRows(3) << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  Eigen::MatrixXd phi(N, pts.rows());
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads;
  for (Index r = 0; r < pts.rows(); ++r) {
    eval_basis_2d(p, pts(r, 0), pts(r, 1), values, grads);
    phi.col(r) = values;
  }
  const Eigen::Map<const Eigen::MatrixXd> coeffs(C.data(), N, mesh.numElements());
  const Eigen::MatrixXd samples = phi.transpose() * coeffs;
  return {samples.minCoeff(), samples.maxCoeff()};
}

RunReport run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ResolvedRun rr = inPhase("configure", [&] { return configure(cfg); });
  const ProblemDefinition& pd = rr.problem;

  if (cfg.writeEvery > 0) {
    inPhase("configure", [&] {
      std::error_code ec;
      std::filesystem::create_directories(cfg.outDir, ec);
      if (ec) throw IoError("cannot create output directory '" + cfg.outDir + "'");
    });
  }

  Discretization disc = inPhase("preprocess", [&] { return make_discretization(std::move(rr.mesh), pd.p, pd); });
  CondensationSolver solver(disc.basis.N, rr.blockSize);

  RunReport report;
  report.testcase = pd.name;
  report.p = pd.p;
  report.numElements = disc.mesh.numElements();
  report.elemUnknowns = disc.numElemUnknowns();
  report.edgeUnknowns = disc.numEdgeUnknowns();
  report.alpha = disc.blocks.alpha;
  report.h = rr.h;

  Eigen::VectorXd C;
  double t = 0.0;
  if (pd.steady) {
    C = inPhase("solve", [&] { return solve_steady(disc, pd, solver).C; });
    if (cfg.writeEvery > 0) {
      report.files.push_back(vtkPath(cfg, 0));
      inPhase("output", [&] { write_vtk(report.files.back(), disc.mesh, pd.p, C); });
    }
  } else {
    const DirkTableau tableau = inPhase("configure", [&] { return dirk_tableau(pd.dirkOrder); });
    report.dirkOrder = pd.dirkOrder;
    report.dt = rr.dt;
    report.steps = rr.steps;
    TimeState state;
    state.C = inPhase("initialize", [&] { return project_initial(disc.mesh, disc.basis, pd.c0); });
    auto output = [&](const TimeState& s) {
      report.files.push_back(vtkPath(cfg, s.step));
      inPhase("output", [&] { write_vtk(report.files.back(), disc.mesh, pd.p, s.C); });
    };
    if (cfg.writeEvery > 0) output(state);
    for (int n = 0; n < rr.steps; ++n) {
      state = inPhase("solve", [&] { return dirk_step(state, disc, pd, tableau, rr.dt, solver); });
      // Snap the clock to the grid to avoid drift in long runs.
      state.t = (n + 1 == rr.steps) ? pd.tEnd : (n + 1) * rr.dt;
      if (cfg.writeEvery > 0 && (state.step % cfg.writeEvery == 0 || n + 1 == rr.steps)) output(state);
    }
    C = std::move(state.C);
    t = state.t;
  }

  inPhase("postprocess", [&] {
    report.tFinal = t;
    if (pd.exact) report.error = compute_l2_error(disc.mesh, pd.p, C, pd.exact, t);
    std::tie(report.minValue, report.maxValue) = solution_range(disc.mesh, pd.p, C);
  });
  report.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<ConvergenceRow> run_sweep(const RunConfig& cfg, const std::vector<int>& degrees,
                                      const std::vector<int>& levels) {
  if (degrees.empty() || levels.empty()) throw ConfigError("sweep needs at least one degree and one level");
  const bool temporal = cfg.testcase == "unsteady_ode";
  std::vector<ConvergenceRow> rows;
  for (int p : degrees)
    for (int j : levels) {
      RunConfig c = cfg;
      c.p = p;
      c.writeEvery = 0;
      if (temporal) {
        c.dt = 1.0 / (5.0 * (1 << j));
        c.steps.reset();
      } else {
        c.level = j;
      }
      const RunReport r = run(c);
      if (!r.error) throw ConfigError("sweep requires a testcase with an exact solution");
      rows.push_back({j, temporal ? r.dt : r.h, r.numElements, p, *r.error, std::nullopt});
    }
  fill_eoc(rows);
  return rows;
}

}  // namespace hdg
