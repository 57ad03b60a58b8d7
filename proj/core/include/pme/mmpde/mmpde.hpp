#pragma once

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"
#include "pme/metric/metric.hpp"

namespace pme {

// Parameters of the equidistribution/alignment mesh energy and its gradient
// flow.  With dimension d = 2 the energy density for one element is
//
//   G = theta * c^{1-p} * T^p  +  (1 - 2 theta) * 2^p * c^{1-p} * D^p,
//
//   T = ||J||_F^2,  D = det(J),  J = Ehat * E^{-1},
//
// where E is the physical element frame, Ehat the computational frame, and
// c the scalar metric on the element.  The total energy is
// I_h = sum_K area(K) * G_K with the physical areas as weights.
struct MmpdeParams {
  double theta = 1.0 / 3.0;
  double p = 2.0;
  double tau = 1e-3;  // gradient-flow time scale
};

// Physical-side quantities of one element that stay fixed while the
// computational vertices move.
struct XiElementContext {
  Eigen::Matrix2d Einv;       // E^{-1}
  Eigen::Matrix2d EinvEinvT;  // E^{-1} E^{-T}
  double inv_detE = 0.0;
  double area = 0.0;          // physical area |K|
  double coef_t = 0.0;        // theta * c^{1-p}
  double coef_d = 0.0;        // (1 - 2 theta) * 2^p * c^{1-p}
};

XiElementContext makeXiContext(const ElementFrame& physical, double c,
                               const MmpdeParams& params);

// Energy density G of one element for computational frame Ehat.
double elementEnergyDensity(const XiElementContext& ctx, const Eigen::Matrix2d& Ehat,
                            const MmpdeParams& params);

// Mesh velocities of the element's three computational vertices (rows 0..2),
// defined by v_i = -(1/area) dI_K/dxi_i where I_K = area * G.  These are the
// raw element contributions before nodal averaging, metric weighting and the
// 1/tau time scale.
void localVelocities(const XiElementContext& ctx, const Eigen::Matrix2d& Ehat,
                     const MmpdeParams& params, Eigen::Matrix<double, 3, 2>& vel);

// Derivative of the three local velocities with respect to the six
// computational vertex coordinates: entry (2i+a, 2j+b) is
// d vel(i,a) / d xi_j[b].
void localVelocityJacobian(const XiElementContext& ctx, const Eigen::Matrix2d& Ehat,
                           const MmpdeParams& params, Eigen::Matrix<double, 6, 6>& jac);

// Total mesh energy I_h pairing computational mesh tc against physical mesh
// th (same connectivity).  Throws MeshTangledError if tc has a non-positively
// oriented element.
double meshEnergy(const TriangleMesh& tc, const TriangleMesh& th,
                  const MmpdeMetric& metric, const MmpdeParams& params);

// Gradient dI_h/dxi stacked as (x0, y0, x1, y1, ...).
Eigen::VectorXd energyGradient(const TriangleMesh& tc, const TriangleMesh& th,
                               const MmpdeMetric& metric, const MmpdeParams& params);

// Gradient-flow nodal velocities dxi_j/dt = (P_j / tau) sum_{K in patch(j)}
// area(K) vel^K_j with P_j = c_j^{p-1}, before any boundary treatment.
Eigen::VectorXd nodalVelocities(const TriangleMesh& tc, const TriangleMesh& th,
                                const MmpdeMetric& metric, const MmpdeParams& params);

}  // namespace pme
