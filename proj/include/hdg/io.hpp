#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdg/mesh.hpp"

namespace hdg {

/// User-facing run parameters; unset optionals fall back to the testcase defaults.
struct RunConfig {
  std::string testcase = "steady";
  std::optional<int> p;
  std::optional<int> level;
  std::optional<int> cells;
  std::optional<int> dirkOrder;
  std::optional<double> dt;
  std::optional<int> steps;
  std::optional<double> tEnd;
  std::optional<double> alpha;
  /// Use max |u . nu| at t = 0 instead of the testcase penalty.
  bool alphaAuto = false;
  std::optional<long> blockSize;
  std::string outDir = ".";
  int writeEvery = 0;
  std::string meshPath;

  /// Range checks that do not need the testcase. Throws ConfigError.
  void validate() const;
};

/// Applies one `key = value` setting. Keys use the CLI flag spelling without
/// dashes (`dirk-order`, `t-end`, `write-every`, ...); underscores are accepted too.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Line-oriented `key = value` text; `#` starts a comment.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});

/// Writes content to path.tmp and renames it into place. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

/// Legacy ASCII VTK with 3 points per triangle (corners duplicated), point
/// data c_h at the corners and cell data equal to the element mean.
std::string format_vtk(const Mesh& mesh, int p, const Eigen::VectorXd& C);
void write_vtk(const std::string& path, const Mesh& mesh, int p, const Eigen::VectorXd& C);

struct ConvergenceRow {
  int j = 0;
  double h = 0.0;
  long K = 0;
  int p = 0;
  double error = 0.0;
  std::optional<double> eoc;
};

/// Fills the eoc field of each row from the previous row with the same p.
void fill_eoc(std::vector<ConvergenceRow>& rows);

/// CSV with header `j,h,K,p,error,eoc`; error and eoc use 3 significant digits,
/// a missing EOC is an empty field.
std::string format_convergence_csv(const std::vector<ConvergenceRow>& rows);
std::vector<ConvergenceRow> parse_convergence_csv(std::istream& in);

/// Aligned text table, one row per level and one error/EOC column pair per degree.
std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

/// "%.2e" formatting, e.g. 6.42e-02.
std::string format_sci3(double v);

}  // namespace hdg
