#pragma once

#include "pme/geometry/mesh.hpp"
#include "pme/metric/metric.hpp"
#include "pme/mmpde/mmpde.hpp"
#include "pme/ode/radau.hpp"

namespace pme {

// The mesh flow is auxiliary: only the quality of the relaxed endpoint
// matters, so it is integrated at stock stiff-solver tolerances rather than
// the tighter ones used for the physical step.
struct XiIntegrateOptions {
  double rtol = 1e-3;
  double atol = 1e-6;
  double h_init = 0.0;  // warm start for the first step of the window
};

struct XiIntegrateResult {
  RadauStats stats;
  double suggested_h = 0.0;
};

// Advance the mesh-energy gradient flow dxi/dt = (P_j / tau) * (patch sums)
// over a window of length dt, moving the computational mesh tc in place.
// The physical mesh th and metric stay frozen.  Boundary vertices are pinned
// (the computational domain keeps its boundary parametrization fixed).
// Throws MeshTangledError when the relaxed endpoint contains an inverted
// element.
XiIntegrateResult integrateXi(TriangleMesh& tc, const TriangleMesh& th,
                              const MmpdeMetric& metric, const MmpdeParams& params,
                              double dt, const XiIntegrateOptions& opts = {});

// Recover the physical mesh from a deformed computational mesh: each interior
// vertex of the reference mesh tc_ref is located inside tc_new and its
// barycentric coordinates are applied to the corresponding element of th.
// Boundary vertices copy th.  Returns the number of vertices that fell back
// to nearest-element projection.  Throws MeshTangledError if the rebuilt mesh
// has an inverted element.
int rebuildPhysical(const TriangleMesh& tc_new, const TriangleMesh& tc_ref,
                    const TriangleMesh& th, TriangleMesh& out);

}  // namespace pme
