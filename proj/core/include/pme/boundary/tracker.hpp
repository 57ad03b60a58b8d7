#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"

namespace pme {

// One explicit Euler advance of the free boundary by Darcy's law: every
// boundary vertex moves with outward normal speed  s = -grad(v_h) . n,
// where grad(v_h) is the area-weighted average of the element gradients on
// the vertex patch and n the weighted vertex normal.
struct BoundaryState {
  std::vector<int> vertex_ids;  // boundary vertices in mesh order
  std::vector<Vec2> positions;  // moved positions
  std::vector<Vec2> normals;
  std::vector<double> speeds;   // signed outward normal speed
};

// Area-weighted patch-average gradient of the vertex field at a vertex.
Vec2 recoverGradient(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                     int vertex);

// Compute the moved boundary (the mesh itself is untouched).  Throws
// BoundaryCollisionError if the moved boundary polylines self-intersect or
// touch each other.
BoundaryState darcyStep(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                        double dt);

// Write the moved positions back into a mesh with the same connectivity.
void applyBoundaryState(TriangleMesh& mesh, const BoundaryState& state);

// True if any two non-adjacent boundary segments intersect, with boundary
// vertices taken from `moved` (one entry per vertex; interior entries are
// ignored).  Exposed for tests.
bool boundarySelfIntersects(const TriangleMesh& mesh, const std::vector<Vec2>& moved);

}  // namespace pme
