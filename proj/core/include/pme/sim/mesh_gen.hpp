#pragma once

#include "pme/geometry/mesh.hpp"

namespace pme {

// Quasi-uniform disk mesh centered at the origin built from concentric
// vertex rings stitched by an angular merge, followed by a few guarded
// smoothing passes.  The element count lands within 20% of the target
// (GenerationError otherwise); boundary vertices sit on the circle to
// machine precision.
TriangleMesh generateDiskMesh(double radius, int target_elements);

// Mesh of the C-shaped support of the complex-domain initial condition: the
// three-quarter annulus 0.5 <= |x| <= 1 (x < 0 or y < 0) closed by half-disk
// caps of radius 0.25 at (0, 0.75) and (0.75, 0).  Single boundary loop with
// 20% element-count tolerance, as above.
TriangleMesh generateComplexSupportMesh(int target_elements);

}  // namespace pme
