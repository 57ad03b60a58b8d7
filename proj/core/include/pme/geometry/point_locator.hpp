#pragma once

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"

namespace pme {

struct LocateResult {
  bool found = false;
  int element = -1;               // best candidate even when !found
  Eigen::Vector3d bary{0, 0, 0};  // barycentric coords (l0, l1, l2) in element
};

// Point location by walking across element adjacencies, starting from the
// last hit (or a caller-supplied hint).  Falls back to a full scan when the
// walk leaves the mesh or cycles, so the result is independent of the walk
// path.  A point is accepted when all barycentric coordinates are >= -1e-10.
//
// The locator keeps mutable walk state, so share one instance per query
// stream and keep the mesh itself const.
class PointLocator {
public:
  explicit PointLocator(const TriangleMesh& mesh) : mesh_(mesh) {}

  LocateResult locate(const Vec2& p, int hint = -1);

  static constexpr double kBaryTol = 1e-10;

private:
  Eigen::Vector3d baryIn(int k, const Vec2& p) const;
  LocateResult scanAll(const Vec2& p) const;

  const TriangleMesh& mesh_;
  int last_hit_ = -1;
};

}  // namespace pme
