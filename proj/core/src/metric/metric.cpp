#include "pme/metric/metric.hpp"

#include <cmath>
#include <cstdio>

namespace pme {

MmpdeMetric buildMetric(const TriangleMesh& mesh, const Eigen::VectorXd& v,
                        double floor) {
  if (v.size() != mesh.numVertices()) {
    throw Error("buildMetric: field size mismatch");
  }
  if (!(floor > 0.0)) {
    throw Error("buildMetric: floor must be positive");
  }
  if (floor < 1e-9 || floor > 1e-2) {
    std::fprintf(stderr, "warning: metric floor %.3e outside usual range [1e-9, 1e-2]\n",
                 floor);
  }
  MmpdeMetric m;
  m.floor = floor;
  m.vert_c.resize(mesh.numVertices());
  for (int i = 0; i < mesh.numVertices(); ++i) {
    m.vert_c[i] = 1.0 / std::sqrt(v[i] * v[i] + floor);
  }
  m.elem_c.resize(mesh.numElements());
  for (int k = 0; k < mesh.numElements(); ++k) {
    const auto& t = mesh.tri(k);
    m.elem_c[k] = (m.vert_c[t[0]] + m.vert_c[t[1]] + m.vert_c[t[2]]) / 3.0;
  }
  return m;
}

double metricVolume(const TriangleMesh& mesh, const MmpdeMetric& metric) {
  double s = 0.0;
  for (int k = 0; k < mesh.numElements(); ++k) {
    s += mesh.elementArea(k) * metric.elem_c[k];
  }
  return s;
}

}  // namespace pme
