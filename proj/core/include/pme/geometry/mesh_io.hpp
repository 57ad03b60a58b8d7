#pragma once

#include <string>

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"

namespace pme {

// Plain-text mesh format:
//   line 1:            <num_vertices> <num_triangles>
//   next num_vertices: <x> <y> <boundary_flag(0|1)>
//   next num_triangles:<i0> <i1> <i2>        (0-based vertex indices)
// The boundary flags are validated against the connectivity-derived boundary.
TriangleMesh loadMeshText(const std::string& path);
void saveMeshText(const TriangleMesh& mesh, const std::string& path);

// Legacy ASCII VTK unstructured grid, with an optional vertex scalar field.
void saveMeshVtk(const TriangleMesh& mesh, const std::string& path,
                 const Eigen::VectorXd* point_scalar = nullptr,
                 const std::string& scalar_name = "v");

}  // namespace pme
