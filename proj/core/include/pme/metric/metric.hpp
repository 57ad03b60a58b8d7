#pragma once

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"

namespace pme {

// Scalar adaptation metric M = c I derived from the pressure field:
//   c = 1 / sqrt(v^2 + floor),
// evaluated per vertex and averaged over each element's vertices.  Small
// pressures (the free boundary region) get large c, i.e. small target
// elements.  The floor bounds c near v = 0.
struct MmpdeMetric {
  Eigen::VectorXd elem_c;  // one value per element
  Eigen::VectorXd vert_c;  // one value per vertex
  double floor = 1e-5;
};

// floor outside [1e-9, 1e-2] is accepted but logged to stderr once per call.
MmpdeMetric buildMetric(const TriangleMesh& mesh, const Eigen::VectorXd& v,
                        double floor = 1e-5);

// Metric volume sum |K| sqrt(det(c_K I)) = sum |K| c_K.
double metricVolume(const TriangleMesh& mesh, const MmpdeMetric& metric);

}  // namespace pme
