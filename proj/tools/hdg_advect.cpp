#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdg/driver.hpp"
#include "hdg/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

// Parses "1,2,3" or "1-4" (or a mix such as "0,2-3").
std::vector<int> parseList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      const auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw hdg::ConfigError("empty range '" + item + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw hdg::ConfigError("cannot parse list entry '" + item + "'");
    }
  }
  return out;
}

void printReport(const hdg::RunReport& r) {
  std::printf("testcase      %s\n", r.testcase.c_str());
  std::printf("p             %d\n", r.p);
  std::printf("elements      %ld\n", r.numElements);
  std::printf("unknowns      %ld element, %ld skeleton\n", r.elemUnknowns, r.edgeUnknowns);
  std::printf("alpha         %.6g\n", r.alpha);
  if (r.steps > 0) std::printf("time steps    %d x %.6g (DIRK order %d)\n", r.steps, r.dt, r.dirkOrder);
  std::printf("final time    %.6g\n", r.tFinal);
  if (r.error) std::printf("L2 error      %.6e\n", *r.error);
  std::printf("range         [%.6g, %.6g]\n", r.minValue, r.maxValue);
  std::printf("wall time     %.3f s\n", r.wallSeconds);
  for (const auto& f : r.files) std::printf("wrote         %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybridized DG solver for linear advection on triangles"};
  hdg::RunConfig cli;
  std::string configPath;
  std::vector<std::string> sweep;

  app.add_option("--config", configPath, "key = value configuration file (flags override it)");
  auto* testcase = app.add_option("--testcase", cli.testcase, "steady, unsteady_ode, unsteady_pde or solid_body");
  auto* p = app.add_option("--p", cli.p, "polynomial degree 0..4 (testcase default)");
  auto* level = app.add_option("--level", cli.level, "refinement level j (3*2^j cells per side)");
  auto* cells = app.add_option("--cells", cli.cells, "cells per side of the structured mesh");
  auto* dirk = app.add_option("--dirk-order", cli.dirkOrder, "DIRK order 1..4 (default min(p+1,4))");
  auto* dt = app.add_option("--dt", cli.dt, "time step");
  auto* steps = app.add_option("--steps", cli.steps, "number of time steps");
  auto* tEnd = app.add_option("--t-end", cli.tEnd, "end time");
  std::string alphaText;
  auto* alpha = app.add_option("--alpha", alphaText, "penalty, or 'auto' for max |u.nu| at t=0 (default 1)");
  auto* block = app.add_option("--block-size", cli.blockSize, "block-inverse batch size, multiple of N");
  auto* out = app.add_option("--out", cli.outDir, "output directory");
  auto* every = app.add_option("--write-every", cli.writeEvery, "VTK output every n steps (0 = none)");
  auto* mesh = app.add_option("--mesh", cli.meshPath, "mesh file to use instead of the structured grid");
  app.add_option("--sweep", sweep, "convergence sweep, e.g. --sweep p=1-3 levels=1-4")->expected(1, 2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    hdg::RunConfig cfg;
    if (!configPath.empty()) cfg = hdg::parse_config_file(configPath);
    // Command-line flags take precedence over the file.
    if (*testcase) cfg.testcase = cli.testcase;
    if (*p) cfg.p = cli.p;
    if (*level) cfg.level = cli.level;
    if (*cells) cfg.cells = cli.cells;
    if (*dirk) cfg.dirkOrder = cli.dirkOrder;
    if (*dt) cfg.dt = cli.dt;
    if (*steps) cfg.steps = cli.steps;
    if (*tEnd) cfg.tEnd = cli.tEnd;
    if (*alpha) hdg::apply_config_entry(cfg, "alpha", alphaText);
    if (*block) cfg.blockSize = cli.blockSize;
    if (*out) cfg.outDir = cli.outDir;
    if (*every) cfg.writeEvery = cli.writeEvery;
    if (*mesh) cfg.meshPath = cli.meshPath;

    if (sweep.empty()) {
      printReport(hdg::run(cfg));
      return kOk;
    }

    std::vector<int> degrees{cfg.p.value_or(1)};
    std::vector<int> levels{1, 2, 3};
    for (const auto& arg : sweep) {
      const auto eq = arg.find('=');
      const std::string key = arg.substr(0, eq);
      if (eq == std::string::npos || (key != "p" && key != "levels"))
        throw hdg::ConfigError("sweep arguments are p=<list> and levels=<list>, got '" + arg + "'");
      (key == "p" ? degrees : levels) = parseList(arg.substr(eq + 1));
    }
    const auto rows = hdg::run_sweep(cfg, degrees, levels);
    std::cout << hdg::format_convergence_table(rows);
    std::filesystem::create_directories(cfg.outDir);
    const std::string csvPath = (std::filesystem::path(cfg.outDir) / (cfg.testcase + "_convergence.csv")).string();
    hdg::write_file_atomic(csvPath, hdg::format_convergence_csv(rows));
    std::cout << "wrote " << csvPath << '\n';
    return kOk;
  } catch (const hdg::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const hdg::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const hdg::IoError& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return kIo;
  }
}
