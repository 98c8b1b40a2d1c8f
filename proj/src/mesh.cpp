#include "hdg/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <map>
#include <utility>

#include <Eigen/LU>

#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"

namespace hdg {

namespace {

// Local vertices (start, end) of local edge n, counterclockwise.
constexpr int kEdgeStart[3] = {1, 2, 0};
constexpr int kEdgeEnd[3] = {2, 0, 1};

}  // namespace

EdgeMask operator|(const EdgeMask& a, const EdgeMask& b) {
  EdgeMask m;
  m.flags = a.flags || b.flags;
  return m;
}

EdgeMask operator&(const EdgeMask& a, const EdgeMask& b) {
  EdgeMask m;
  m.flags = a.flags && b.flags;
  return m;
}

EdgeMask interiorMask(const Mesh& mesh) {
  EdgeMask m(mesh.numElements());
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) m(k, n) = mesh.isInterior(k, n);
  return m;
}

EdgeMask exteriorMask(const Mesh& mesh) {
  EdgeMask m(mesh.numElements());
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) m(k, n) = !mesh.isInterior(k, n);
  return m;
}

Mesh generate_structured_mesh(int cellsPerSide, const Rectangle& domain) {
  if (cellsPerSide < 1) throw MeshError("cellsPerSide must be positive");
  if (!(domain.xmax > domain.xmin) || !(domain.ymax > domain.ymin))
    throw MeshError("degenerate rectangle");

  const int n = cellsPerSide;
  const double hx = (domain.xmax - domain.xmin) / n;
  const double hy = (domain.ymax - domain.ymin) / n;

  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices((n + 1) * (n + 1), 2);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      // Pin the last row/column to the exact boundary coordinate.
      vertices(j * (n + 1) + i, 0) = (i == n) ? domain.xmax : domain.xmin + i * hx;
      vertices(j * (n + 1) + i, 1) = (j == n) ? domain.ymax : domain.ymin + j * hy;
    }

  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles(2 * n * n, 3);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = j * (n + 1) + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + n + 1;
      const int v11 = v01 + 1;
      triangles.row(k++) << v00, v10, v01;
      triangles.row(k++) << v10, v11, v01;
    }
  return make_mesh(std::move(vertices), std::move(triangles));
}

Mesh make_mesh(Eigen::Matrix<double, Eigen::Dynamic, 2> vertices,
               Eigen::Matrix<int, Eigen::Dynamic, 3> triangles) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  build_edge_topology(mesh);
  compute_geometry(mesh);
  return mesh;
}

void build_edge_topology(Mesh& mesh) {
  const Index K = mesh.numElements();
  const Index V = mesh.numVertices();
  for (Index k = 0; k < K; ++k)
    for (int i = 0; i < 3; ++i)
      if (mesh.triangles(k, i) < 0 || mesh.triangles(k, i) >= V)
        throw MeshError("triangle " + std::to_string(k) + " references invalid vertex " +
                        std::to_string(mesh.triangles(k, i)));

  // (min vertex, max vertex) -> incident (element, local edge) pairs, in element order.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> incidence;
  for (Index k = 0; k < K; ++k)
    for (int n = 0; n < 3; ++n) {
      const int a = mesh.triangles(k, kEdgeStart[n]);
      const int b = mesh.triangles(k, kEdgeEnd[n]);
      if (a == b) throw MeshError("triangle " + std::to_string(k) + " has a repeated vertex");
      incidence[{std::min(a, b), std::max(a, b)}].emplace_back(static_cast<int>(k), n);
    }

  const Index Kbar = static_cast<Index>(incidence.size());
  mesh.edgeVertices.resize(Kbar, 2);
  mesh.elemOfEdge.resize(Kbar, 2);
  mesh.edgeOfElem.resize(K, 3);
  mesh.sideOfElem.resize(K, 3);
  mesh.boundaryEdge.assign(Kbar, false);

  int e = 0;
  for (const auto& [verts, adj] : incidence) {
    if (adj.size() > 2)
      throw MeshError("non-conforming mesh: edge (" + std::to_string(verts.first) + ", " +
                      std::to_string(verts.second) + ") is shared by " + std::to_string(adj.size()) +
                      " triangles");
    const auto [k0, n0] = adj[0];
    mesh.elemOfEdge(e, 0) = k0;
    mesh.elemOfEdge(e, 1) = adj.size() == 2 ? adj[1].first : kNoElement;
    mesh.boundaryEdge[e] = adj.size() == 1;
    mesh.edgeVertices(e, 0) = mesh.triangles(k0, kEdgeStart[n0]);
    mesh.edgeVertices(e, 1) = mesh.triangles(k0, kEdgeEnd[n0]);
    for (std::size_t slot = 0; slot < adj.size(); ++slot) {
      mesh.edgeOfElem(adj[slot].first, adj[slot].second) = e;
      mesh.sideOfElem(adj[slot].first, adj[slot].second) = static_cast<int>(slot);
    }
    if (adj.size() == 2 && adj[0].first == adj[1].first)
      throw MeshError("triangle " + std::to_string(adj[0].first) + " uses edge (" +
                      std::to_string(verts.first) + ", " + std::to_string(verts.second) + ") twice");
    ++e;
  }
}

void compute_geometry(Mesh& mesh) {
  const Index K = mesh.numElements();
  mesh.jacobians.resize(K);
  mesh.normals.resize(K);
  mesh.areaT.resize(K);
  for (Index k = 0; k < K; ++k) {
    const Eigen::Vector2d x0 = mesh.corner(k, 0);
    Eigen::Matrix2d B;
    B.col(0) = mesh.corner(k, 1) - x0;
    B.col(1) = mesh.corner(k, 2) - x0;
    const double det = B.determinant();
    if (!(det > 0.0))
      throw MeshError("triangle " + std::to_string(k) +
                      (det == 0.0 ? " has zero area" : " is clockwise or degenerate"));
    mesh.jacobians[k] = B;
    mesh.areaT[k] = 0.5 * det;
    for (int n = 0; n < 3; ++n) {
      const Eigen::Vector2d t = mesh.corner(k, kEdgeEnd[n]) - mesh.corner(k, kEdgeStart[n]);
      mesh.normals[k][n] = Eigen::Vector2d(t[1], -t[0]).normalized();
    }
  }
  mesh.lengthE.resize(mesh.numEdges());
  for (Index e = 0; e < mesh.numEdges(); ++e)
    mesh.lengthE[e] = (mesh.vertex(mesh.edgeVertices(e, 1)) - mesh.vertex(mesh.edgeVertices(e, 0))).norm();
}

BoundaryMasks classify_boundary_edges(const Mesh& mesh,
                                      const std::vector<std::array<Eigen::VectorXd, 3>>& normalVelocity) {
  BoundaryMasks masks{EdgeMask(mesh.numElements()), EdgeMask(mesh.numElements())};
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      if (mesh.isInterior(k, n)) continue;
      if (normalVelocity[k][n].mean() < 0.0)
        masks.inflow(k, n) = true;
      else
        masks.outflow(k, n) = true;
    }
  return masks;
}

BoundaryMasks classify_boundary_edges(const Mesh& mesh, const VectorField& velocity, double t,
                                      const QuadRule1D& rule) {
  std::vector<std::array<Eigen::VectorXd, 3>> unu(mesh.numElements());
  for (Index k = 0; k < mesh.numElements(); ++k)
    for (int n = 0; n < 3; ++n) {
      unu[k][n] = Eigen::VectorXd::Zero(rule.size());
      if (mesh.isInterior(k, n)) continue;
      const Eigen::Vector2d a = mesh.corner(k, kEdgeStart[n]);
      const Eigen::Vector2d b = mesh.corner(k, kEdgeEnd[n]);
      for (Index r = 0; r < rule.size(); ++r)
        unu[k][n][r] = velocity(t, a + rule.points[r] * (b - a)).dot(mesh.normals[k][n]);
    }
  return classify_boundary_edges(mesh, unu);
}

Mesh read_mesh(std::istream& in) {
  long V = 0, K = 0;
  if (!(in >> V >> K) || V < 3 || K < 1) throw MeshError("mesh header must be 'V K' with V >= 3, K >= 1");
  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices(V, 2);
  for (long v = 0; v < V; ++v)
    if (!(in >> vertices(v, 0) >> vertices(v, 1)))
      throw MeshError("failed to read vertex " + std::to_string(v + 1));
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles(K, 3);
  for (long k = 0; k < K; ++k) {
    for (int i = 0; i < 3; ++i) {
      long idx = 0;
      if (!(in >> idx)) throw MeshError("failed to read triangle " + std::to_string(k + 1));
      if (idx < 1 || idx > V)
        throw MeshError("triangle " + std::to_string(k + 1) + " references vertex " + std::to_string(idx) +
                        " outside 1.." + std::to_string(V));
      triangles(k, i) = static_cast<int>(idx - 1);
    }
  }
  return make_mesh(std::move(vertices), std::move(triangles));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.numVertices() << ' ' << mesh.numElements() << '\n';
  out.precision(17);
  for (Index v = 0; v < mesh.numVertices(); ++v) out << mesh.vertices(v, 0) << ' ' << mesh.vertices(v, 1) << '\n';
  for (Index k = 0; k < mesh.numElements(); ++k)
    out << mesh.triangles(k, 0) + 1 << ' ' << mesh.triangles(k, 1) + 1 << ' ' << mesh.triangles(k, 2) + 1 << '\n';
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_mesh(out, mesh);
  if (!out) throw IoError("failed writing mesh to '" + path + "'");
}

}  // namespace hdg
