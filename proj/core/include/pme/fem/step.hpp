#pragma once

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"
#include "pme/ode/radau.hpp"

namespace pme {

// Straight-line vertex motion over one slab: X(t) interpolates linearly
// between the start and end configurations, so the nodal mesh velocity is
// constant in time.
struct MeshTrajectory {
  const TriangleMesh* topology = nullptr;  // connectivity only
  Eigen::VectorXd x_start;
  Eigen::VectorXd x_end;
  double t_start = 0.0;
  double t_end = 0.0;

  Eigen::VectorXd positionsAt(double t) const {
    const double s = (t - t_start) / (t_end - t_start);
    return (1.0 - s) * x_start + s * x_end;
  }
  Eigen::VectorXd velocity() const {
    return (x_end - x_start) / (t_end - t_start);
  }
};

struct PhysicalStepOptions {
  double rtol = 1e-6;
  double atol = 1e-8;
  double h_init = 0.0;  // warm start for the stage solver
};

struct PhysicalStepResult {
  Eigen::VectorXd v;  // full vertex field at t_end (boundary entries zero)
  RadauStats stats;
  double suggested_h = 0.0;
};

// Integrate the interior pressure values over one slab while the mesh moves
// along the given trajectory.  v_start is the full vertex field at t_start
// with zero boundary entries.
PhysicalStepResult stepPhysical(const Eigen::VectorXd& v_start,
                                const MeshTrajectory& traj, double m,
                                const PhysicalStepOptions& opts = {});

}  // namespace pme
