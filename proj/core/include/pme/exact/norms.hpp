#pragma once

#include "pme/exact/solutions.hpp"
#include "pme/geometry/mesh.hpp"

namespace pme {

struct ErrorNorms {
  double l1_v = 0.0;
  double l2_v = 0.0;
  double l1_u = 0.0;
  double l2_u = 0.0;
  double linf_boundary = 0.0;  // max | |x_b| - R(t) | over boundary vertices
};

// Error of the discrete pressure field against the self-similar exact
// solution at time t, integrated elementwise with a degree-6 rule.  For the
// density errors the discrete pressure is clamped at zero before the
// u = (m v)^{1/m} transform, since small negative undershoots have no density
// counterpart.
ErrorNorms computeErrorNorms(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                             const BarenblattPattle& exact, double t);

}  // namespace pme
