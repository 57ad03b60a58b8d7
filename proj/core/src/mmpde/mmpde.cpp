#include "pme/mmpde/mmpde.hpp"

#include <cmath>

namespace pme {

namespace {

Eigen::Matrix2d rawFrame(const TriangleMesh& mesh, int k) {
  const auto& t = mesh.tri(k);
  Eigen::Matrix2d E;
  E.col(0) = mesh.vertex(t[1]) - mesh.vertex(t[0]);
  E.col(1) = mesh.vertex(t[2]) - mesh.vertex(t[0]);
  return E;
}

inline Eigen::Matrix2d adj2(const Eigen::Matrix2d& A) {
  Eigen::Matrix2d r;
  r << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  return r;
}

inline double det2(const Eigen::Matrix2d& A) {
  return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
}

}  // namespace

XiElementContext makeXiContext(const ElementFrame& physical, double c,
                               const MmpdeParams& params) {
  XiElementContext ctx;
  ctx.Einv = physical.Einv;
  ctx.EinvEinvT = physical.Einv * physical.Einv.transpose();
  ctx.inv_detE = 1.0 / physical.det;
  ctx.area = physical.area;
  const double cpow = std::pow(c, 1.0 - params.p);
  ctx.coef_t = params.theta * cpow;
  ctx.coef_d = (1.0 - 2.0 * params.theta) * std::pow(2.0, params.p) * cpow;
  return ctx;
}

double elementEnergyDensity(const XiElementContext& ctx, const Eigen::Matrix2d& Ehat,
                            const MmpdeParams& params) {
  const Eigen::Matrix2d J = Ehat * ctx.Einv;
  const double T = J.squaredNorm();
  const double D = det2(Ehat) * ctx.inv_detE;
  return ctx.coef_t * std::pow(T, params.p) + ctx.coef_d * std::pow(D, params.p);
}

void localVelocities(const XiElementContext& ctx, const Eigen::Matrix2d& Ehat,
                     const MmpdeParams& params, Eigen::Matrix<double, 3, 2>& vel) {
  const double p = params.p;
  const Eigen::Matrix2d J = Ehat * ctx.Einv;
  const double T = J.squaredNorm();
  const double D = det2(Ehat) * ctx.inv_detE;
  const double a = 2.0 * p * ctx.coef_t;
  const double b = p * ctx.coef_d;
  // V has rows (v1^T, v2^T); the D^p * Ehat^{-1} term is written via the
  // adjugate so nothing blows up when Ehat happens to be near singular during
  // an intermediate solver iterate.
  const Eigen::Matrix2d V = -a * std::pow(T, p - 1.0) * (ctx.Einv * J.transpose()) -
                            b * std::pow(D, p - 1.0) * ctx.inv_detE * adj2(Ehat);
  vel.row(1) = V.row(0);
  vel.row(2) = V.row(1);
  vel.row(0) = -vel.row(1) - vel.row(2);
}

void localVelocityJacobian(const XiElementContext& ctx, const Eigen::Matrix2d& Ehat,
                           const MmpdeParams& params, Eigen::Matrix<double, 6, 6>& jac) {
  const double p = params.p;
  const Eigen::Matrix2d J = Ehat * ctx.Einv;
  const double T = J.squaredNorm();
  const double D = det2(Ehat) * ctx.inv_detE;
  const double a = 2.0 * p * ctx.coef_t;
  const double b = p * ctx.coef_d;
  const Eigen::Matrix2d EJt = ctx.Einv * J.transpose();
  const Eigen::Matrix2d adjE = adj2(Ehat);
  const double Tp1 = std::pow(T, p - 1.0);
  const double Tp2 = std::pow(T, p - 2.0);
  const double Dp1 = std::pow(D, p - 1.0);
  const double Dp2 = std::pow(D, p - 2.0);

  for (int vtx = 0; vtx < 3; ++vtx) {
    for (int mu = 0; mu < 2; ++mu) {
      Eigen::Matrix2d dE = Eigen::Matrix2d::Zero();
      if (vtx == 0) {
        dE(mu, 0) = -1.0;
        dE(mu, 1) = -1.0;
      } else {
        dE(mu, vtx - 1) = 1.0;
      }
      const Eigen::Matrix2d dJ = dE * ctx.Einv;
      const double dT = 2.0 * (J.cwiseProduct(dJ)).sum();
      const double dDet = dE(0, 0) * Ehat(1, 1) + Ehat(0, 0) * dE(1, 1) -
                          dE(0, 1) * Ehat(1, 0) - Ehat(0, 1) * dE(1, 0);
      const double dD = dDet * ctx.inv_detE;
      const Eigen::Matrix2d dV =
          -a * ((p - 1.0) * Tp2 * dT * EJt + Tp1 * (ctx.EinvEinvT * dE.transpose())) -
          b * ctx.inv_detE * ((p - 1.0) * Dp2 * dD * adjE + Dp1 * adj2(dE));
      const int col = 2 * vtx + mu;
      // Rows: vertex 1 gets dV.row(0), vertex 2 gets dV.row(1), vertex 0 the
      // negated sum (velocities of a single element sum to zero).
      jac(2 * 1 + 0, col) = dV(0, 0);
      jac(2 * 1 + 1, col) = dV(0, 1);
      jac(2 * 2 + 0, col) = dV(1, 0);
      jac(2 * 2 + 1, col) = dV(1, 1);
      jac(2 * 0 + 0, col) = -dV(0, 0) - dV(1, 0);
      jac(2 * 0 + 1, col) = -dV(0, 1) - dV(1, 1);
    }
  }
}

double meshEnergy(const TriangleMesh& tc, const TriangleMesh& th,
                  const MmpdeMetric& metric, const MmpdeParams& params) {
  if (tc.numElements() != th.numElements() || tc.numVertices() != th.numVertices()) {
    throw Error("meshEnergy: mesh pair must share connectivity");
  }
  double energy = 0.0;
  for (int k = 0; k < th.numElements(); ++k) {
    const XiElementContext ctx = makeXiContext(th.elementFrame(k), metric.elem_c[k], params);
    const Eigen::Matrix2d Ehat = rawFrame(tc, k);
    if (det2(Ehat) <= 0.0) {
      throw MeshTangledError("meshEnergy: computational element " + std::to_string(k) +
                             " is inverted");
    }
    energy += ctx.area * elementEnergyDensity(ctx, Ehat, params);
  }
  return energy;
}

Eigen::VectorXd energyGradient(const TriangleMesh& tc, const TriangleMesh& th,
                               const MmpdeMetric& metric, const MmpdeParams& params) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * tc.numVertices());
  Eigen::Matrix<double, 3, 2> vel;
  for (int k = 0; k < th.numElements(); ++k) {
    const XiElementContext ctx = makeXiContext(th.elementFrame(k), metric.elem_c[k], params);
    localVelocities(ctx, rawFrame(tc, k), params, vel);
    const auto& t = tc.tri(k);
    for (int i = 0; i < 3; ++i) {
      grad[2 * t[i]] -= ctx.area * vel(i, 0);
      grad[2 * t[i] + 1] -= ctx.area * vel(i, 1);
    }
  }
  return grad;
}

Eigen::VectorXd nodalVelocities(const TriangleMesh& tc, const TriangleMesh& th,
                                const MmpdeMetric& metric, const MmpdeParams& params) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * tc.numVertices());
  Eigen::Matrix<double, 3, 2> vel;
  for (int k = 0; k < th.numElements(); ++k) {
    const XiElementContext ctx = makeXiContext(th.elementFrame(k), metric.elem_c[k], params);
    localVelocities(ctx, rawFrame(tc, k), params, vel);
    const auto& t = tc.tri(k);
    for (int i = 0; i < 3; ++i) {
      w[2 * t[i]] += ctx.area * vel(i, 0);
      w[2 * t[i] + 1] += ctx.area * vel(i, 1);
    }
  }
  for (int j = 0; j < tc.numVertices(); ++j) {
    const double scale = std::pow(metric.vert_c[j], params.p - 1.0) / params.tau;
    w[2 * j] *= scale;
    w[2 * j + 1] *= scale;
  }
  return w;
}

}  // namespace pme
