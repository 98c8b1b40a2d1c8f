#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdg/types.hpp"

namespace hdg {

class QuadRule1D;

/// Marker for the missing outer element of a boundary edge.
inline constexpr int kNoElement = -1;

/// Conforming triangulation with its edge skeleton.
///
/// Indices are 0-based. Local edge n of a triangle is opposite local vertex n,
/// i.e. edge 0 runs from vertex 1 to vertex 2, edge 1 from vertex 2 to vertex 0
/// and edge 2 from vertex 0 to vertex 1 (counterclockwise). A global edge is
/// parameterized in the direction its slot-0 ("inner") element traverses it,
/// so the slot-1 ("outer") element sees it reversed.
struct Mesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;

  /// Start/end vertex of each global edge, in the slot-0 element's direction.
  Eigen::Matrix<int, Eigen::Dynamic, 2> edgeVertices;
  /// rho: (element, local edge) -> global edge.
  Eigen::Matrix<int, Eigen::Dynamic, 3> edgeOfElem;
  /// kappa: (global edge, slot) -> element; slot 1 is kNoElement on the boundary.
  Eigen::Matrix<int, Eigen::Dynamic, 2> elemOfEdge;
  /// Slot (0 or 1) that element k occupies on its local edge n.
  Eigen::Matrix<int, Eigen::Dynamic, 3> sideOfElem;

  std::vector<std::array<Eigen::Vector2d, 3>> normals;
  std::vector<Eigen::Matrix2d> jacobians;
  Eigen::VectorXd areaT;
  Eigen::VectorXd lengthE;
  std::vector<bool> boundaryEdge;

  Index numVertices() const { return vertices.rows(); }
  Index numElements() const { return triangles.rows(); }
  Index numEdges() const { return edgeVertices.rows(); }

  Eigen::Vector2d vertex(Index v) const { return vertices.row(v).transpose(); }
  Eigen::Vector2d corner(Index k, int i) const { return vertex(triangles(k, i)); }

  /// Affine map F_k from the reference triangle onto element k.
  Eigen::Vector2d toPhysical(Index k, const Eigen::Vector2d& ref) const {
    return jacobians[k] * ref + corner(k, 0);
  }

  double edgeLength(Index k, int n) const { return lengthE[edgeOfElem(k, n)]; }
  bool isInterior(Index k, int n) const { return !boundaryEdge[edgeOfElem(k, n)]; }
};

/// Per (element, local edge) selection flags.
struct EdgeMask {
  Eigen::Array<bool, Eigen::Dynamic, 3> flags;

  EdgeMask() = default;
  explicit EdgeMask(Index numElements) : flags(numElements, 3) { flags.setConstant(false); }

  bool operator()(Index k, int n) const { return flags(k, n); }
  bool& operator()(Index k, int n) { return flags(k, n); }
  Index count() const { return flags.count(); }
};

EdgeMask operator|(const EdgeMask& a, const EdgeMask& b);
EdgeMask operator&(const EdgeMask& a, const EdgeMask& b);

EdgeMask interiorMask(const Mesh& mesh);
EdgeMask exteriorMask(const Mesh& mesh);

struct Rectangle {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  double area() const { return (xmax - xmin) * (ymax - ymin); }
};

/// Friedrichs-Keller triangulation: each cell is split along its
/// lower-right to upper-left diagonal. K = 2 * cellsPerSide^2.
Mesh generate_structured_mesh(int cellsPerSide, const Rectangle& domain = {});

/// Builds a mesh from raw coordinates and counterclockwise connectivity,
/// filling topology and geometry.
Mesh make_mesh(Eigen::Matrix<double, Eigen::Dynamic, 2> vertices,
               Eigen::Matrix<int, Eigen::Dynamic, 3> triangles);

/// Enumerates unique edges sorted by (min vertex, max vertex) and fills
/// edgeVertices, edgeOfElem, elemOfEdge and sideOfElem. The inner slot of an
/// interior edge holds the smaller element index.
void build_edge_topology(Mesh& mesh);

/// Fills jacobians, areas, edge lengths and outward normals.
void compute_geometry(Mesh& mesh);

struct BoundaryMasks {
  EdgeMask inflow;
  EdgeMask outflow;
};

/// Exterior edges whose mean u.nu over the rule's points is negative are
/// inflow; all other exterior edges (including u.nu == 0) are outflow.
BoundaryMasks classify_boundary_edges(const Mesh& mesh, const VectorField& velocity, double t,
                                      const QuadRule1D& rule);

/// Same classification from precomputed normal velocities [k][n](r).
BoundaryMasks classify_boundary_edges(const Mesh& mesh,
                                      const std::vector<std::array<Eigen::VectorXd, 3>>& normalVelocity);

/// Plain-text mesh format: header "V K", V lines "x y", K lines "i1 i2 i3"
/// with 1-based counterclockwise vertex indices.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace hdg
