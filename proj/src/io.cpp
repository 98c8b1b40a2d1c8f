#include "hdg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hdg/basis.hpp"
#include "hdg/errors.hpp"
#include "hdg/problems.hpp"

namespace hdg {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parseNumber(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof())
    throw ConfigError("invalid value '" + value + "' for '" + key + "'");
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (p) checkDegree(*p);
  if (level && (*level < 0 || *level > 8)) throw ConfigError("level must be in 0..8");
  if (cells && *cells < 1) throw ConfigError("cells must be positive");
  if (dirkOrder && (*dirkOrder < 1 || *dirkOrder > 4)) throw ConfigError("dirk-order must be in 1..4");
  if (dt && !(*dt > 0.0)) throw ConfigError("dt must be positive");
  if (steps && *steps < 1) throw ConfigError("steps must be positive");
  if (tEnd && !(*tEnd >= 0.0)) throw ConfigError("t-end must be non-negative");
  if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (blockSize && *blockSize < 1) throw ConfigError("block-size must be positive");
  if (writeEvery < 0) throw ConfigError("write-every must be >= 0");
  if (dt && steps) throw ConfigError("give either dt or steps, not both");
}

void apply_config_entry(RunConfig& cfg, const std::string& rawKey, const std::string& value) {
  std::string key = rawKey;
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "testcase") cfg.testcase = value;
  else if (key == "p") cfg.p = parseNumber<int>(key, value);
  else if (key == "level") cfg.level = parseNumber<int>(key, value);
  else if (key == "cells") cfg.cells = parseNumber<int>(key, value);
  else if (key == "dirk-order") cfg.dirkOrder = parseNumber<int>(key, value);
  else if (key == "dt") cfg.dt = parseNumber<double>(key, value);
  else if (key == "steps") cfg.steps = parseNumber<int>(key, value);
  else if (key == "t-end") cfg.tEnd = parseNumber<double>(key, value);
  else if (key == "alpha") {
    cfg.alphaAuto = value == "auto";
    if (cfg.alphaAuto)
      cfg.alpha.reset();
    else
      cfg.alpha = parseNumber<double>(key, value);
  }
  else if (key == "block-size") cfg.blockSize = parseNumber<long>(key, value);
  else if (key == "out") cfg.outDir = value;
  else if (key == "write-every") cfg.writeEvery = parseNumber<int>(key, value);
  else if (key == "mesh") cfg.meshPath = value;
  else throw ConfigError("unknown configuration key '" + rawKey + "'");
}

RunConfig parse_config(std::istream& in, RunConfig cfg) {
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineNo) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

std::string format_vtk(const Mesh& mesh, int p, const Eigen::VectorXd& C) {
  const Index K = mesh.numElements();
  if (C.size() != K * numElemDofs(p)) throw ConfigError("coefficient vector does not match mesh and degree");
  const Eigen::Vector2d corners[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

  std::ostringstream out;
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\nHDG advection solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 3 * K << " double\n";
  for (Index k = 0; k < K; ++k)
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d x = mesh.corner(k, i);
      out << x[0] << ' ' << x[1] << " 0\n";
    }
  out << "CELLS " << K << ' ' << 4 * K << '\n';
  for (Index k = 0; k < K; ++k) out << "3 " << 3 * k << ' ' << 3 * k + 1 << ' ' << 3 * k + 2 << '\n';
  out << "CELL_TYPES " << K << '\n';
  for (Index k = 0; k < K; ++k) out << "5\n";

  out << "POINT_DATA " << 3 * K << "\nSCALARS c double 1\nLOOKUP_TABLE default\n";
  for (Index k = 0; k < K; ++k)
    for (const auto& xhat : corners) out << evaluate_solution(C, p, k, xhat) << '\n';

  // phi_1 = sqrt(2) is the only basis function with nonzero mean.
  const Index N = numElemDofs(p);
  out << "CELL_DATA " << K << "\nSCALARS c_mean double 1\nLOOKUP_TABLE default\n";
  for (Index k = 0; k < K; ++k) out << std::sqrt(2.0) * C[k * N] << '\n';
  return out.str();
}

void write_vtk(const std::string& path, const Mesh& mesh, int p, const Eigen::VectorXd& C) {
  write_file_atomic(path, format_vtk(mesh, p, C));
}

std::string format_sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void fill_eoc(std::vector<ConvergenceRow>& rows) {
  std::map<int, const ConvergenceRow*> previous;
  for (auto& row : rows) {
    row.eoc.reset();
    if (auto it = previous.find(row.p); it != previous.end() && it->second->error > 0.0 && row.error > 0.0)
      row.eoc = std::log(it->second->error / row.error) / std::log(it->second->h / row.h);
    previous[row.p] = &row;
  }
}

std::string format_convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "j,h,K,p,error,eoc\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.j << ',' << r.h << ',' << r.K << ',' << r.p << ',' << format_sci3(r.error) << ',';
    if (r.eoc) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", *r.eoc);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::vector<ConvergenceRow> parse_convergence_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "j,h,K,p,error,eoc")
    throw IoError("convergence CSV must start with header 'j,h,K,p,error,eoc'");
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() == 5) fields.emplace_back();
    if (fields.size() != 6) throw IoError("malformed convergence CSV row '" + line + "'");
    ConvergenceRow r;
    try {
      r.j = std::stoi(fields[0]);
      r.h = std::stod(fields[1]);
      r.K = std::stol(fields[2]);
      r.p = std::stoi(fields[3]);
      r.error = std::stod(fields[4]);
      if (!fields[5].empty()) r.eoc = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw IoError("malformed convergence CSV row '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::set<int> degrees, levels;
  std::map<std::pair<int, int>, const ConvergenceRow*> byKey;
  std::map<int, long> elements;
  for (const auto& r : rows) {
    degrees.insert(r.p);
    levels.insert(r.j);
    byKey[{r.j, r.p}] = &r;
    elements[r.j] = r.K;
  }
  std::ostringstream out;
  out << std::setw(3) << "j" << std::setw(9) << "K";
  for (int p : degrees) out << std::setw(12) << ("p=" + std::to_string(p)) << std::setw(7) << "EOC";
  out << '\n';
  for (int j : levels) {
    out << std::setw(3) << j << std::setw(9) << elements[j];
    for (int p : degrees) {
      const auto it = byKey.find({j, p});
      if (it == byKey.end()) {
        out << std::setw(12) << "" << std::setw(7) << "";
        continue;
      }
      out << std::setw(12) << format_sci3(it->second->error);
      if (it->second->eoc) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", *it->second->eoc);
        out << std::setw(7) << buf;
      } else {
        out << std::setw(7) << "--";
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace hdg
