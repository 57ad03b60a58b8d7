#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "pme/errors.hpp"

namespace pme {

using Vec2 = Eigen::Vector2d;

// Affine frame of a triangle: x(l1,l2) = x0 + E*(l1,l2) where E has columns
// x1-x0 and x2-x0.  det = det(E) = 2*area and is strictly positive for a valid
// element.  Einv is cached because nearly every downstream kernel needs it.
struct ElementFrame {
  Eigen::Matrix2d E;
  Eigen::Matrix2d Einv;
  double det = 0.0;
  double area = 0.0;

  // Gradients of the barycentric basis functions (l0, l1, l2) as rows.
  // l1, l2 are the rows of Einv; l0 = 1 - l1 - l2.
  Eigen::Matrix<double, 3, 2> gradLambda() const {
    Eigen::Matrix<double, 3, 2> g;
    g.row(1) = Einv.row(0);
    g.row(2) = Einv.row(1);
    g.row(0) = -g.row(1) - g.row(2);
    return g;
  }
};

// One (element, local vertex) incidence of a vertex patch.
struct PatchEntry {
  int element;
  int local;  // index of the vertex within tri(element), in {0,1,2}
};

// Conforming triangular mesh of a polygonal domain, possibly with holes.
//
// The constructor canonicalizes its input:
//   - triangles are reordered to counterclockwise orientation,
//   - vertices are renumbered so all interior vertices precede all boundary
//     vertices (stable within each group),
//   - boundary loops are extracted with the domain on the left,
//   - vertex->element patches and element neighbor tables are built.
//
// Connectivity is immutable after construction; vertex positions may be moved
// with setVertex/setPositions (the adjacency stays valid as long as the caller
// keeps elements non-inverted, which elementFrame() checks on evaluation).
class TriangleMesh {
public:
  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  int numVertices() const { return static_cast<int>(vertices_.size()); }
  int numInterior() const { return n_interior_; }
  int numBoundary() const { return numVertices() - n_interior_; }
  int numElements() const { return static_cast<int>(tris_.size()); }

  bool isBoundaryVertex(int v) const { return v >= n_interior_; }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::array<int, 3>& tri(int k) const { return tris_[k]; }
  const std::vector<std::array<int, 3>>& triangles() const { return tris_; }

  void setVertex(int v, const Vec2& p) { vertices_[v] = p; }
  void setVertices(std::vector<Vec2> pts);

  // Stacked coordinate vector (x0, y0, x1, y1, ...), used by mesh-motion ODEs.
  Eigen::VectorXd positionsVector() const;
  void setPositionsVector(const Eigen::VectorXd& xy);

  // Throws NonPositiveAreaError if det(E) <= 1e-14 * (longest edge)^2.
  ElementFrame elementFrame(int k) const;
  double elementArea(int k) const { return elementFrame(k).area; }

  // Elements incident to vertex v, each with v's local index.
  const std::vector<PatchEntry>& patch(int v) const { return patches_[v]; }

  // Element adjacent to element k across the edge opposite local vertex i,
  // or -1 on the boundary.
  int neighbor(int k, int i) const { return neighbors_[k][i]; }

  // Boundary loops as ordered vertex lists with the domain on the left
  // (outer loops counterclockwise, hole loops clockwise).
  const std::vector<std::vector<int>>& boundaryLoops() const { return loops_; }

  // Predecessor / successor of a boundary vertex along its loop; -1 for
  // interior vertices.
  int boundaryPrev(int v) const { return prev_[v]; }
  int boundaryNext(int v) const { return next_[v]; }

  // Outward unit normal at a boundary vertex: the normals of the two incident
  // boundary edges averaged with inverse-edge-length weights (for vertices
  // sampling a smooth curve this reproduces the curve normal; for a symmetric
  // corner it gives the bisector).
  Vec2 boundaryNormal(int v) const;

  // Unit tangent at a boundary vertex, pointing along the loop direction.
  Vec2 boundaryTangent(int v) const;

  // Exterior turn angle at a boundary vertex in [0, pi]; 0 for a straight run.
  double boundaryTurnAngle(int v) const;

  double totalArea() const;

private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> tris_;
  int n_interior_ = 0;

  std::vector<std::vector<PatchEntry>> patches_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<std::vector<int>> loops_;
  std::vector<int> prev_;
  std::vector<int> next_;
};

}  // namespace pme
