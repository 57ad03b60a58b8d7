#include "pme/mmpde/xi_integrator.hpp"

#include <cmath>
#include <vector>

#include "pme/geometry/point_locator.hpp"

namespace pme {

namespace {

// Gradient-flow ODE for the stacked computational vertex coordinates.
// Physical-side element data is precomputed; each evaluation only rebuilds
// computational frames from the state vector.  Boundary vertices are pinned:
// the computational domain is a fixed reference shape, and letting boundary
// points slide along a polygonal approximation of a curved boundary folds
// elements wherever the curvature changes character (the relaxation scale
// P_j/tau makes boundary vertices far faster than their interior neighbors).
class XiFlowSystem final : public ImplicitOdeSystem {
public:
  XiFlowSystem(const TriangleMesh& tc0, const TriangleMesh& th,
               const MmpdeMetric& metric, const MmpdeParams& params)
      : topo_(tc0), params_(params) {
    const int ne = th.numElements();
    ctx_.reserve(ne);
    for (int k = 0; k < ne; ++k) {
      ctx_.push_back(makeXiContext(th.elementFrame(k), metric.elem_c[k], params));
    }
    scale_.resize(tc0.numVertices());
    for (int j = 0; j < tc0.numVertices(); ++j) {
      scale_[j] = std::pow(metric.vert_c[j], params.p - 1.0) / params.tau;
    }
  }

  int size() const override { return 2 * topo_.numVertices(); }

  void rhs(double /*t*/, const Eigen::VectorXd& y, Eigen::VectorXd& f) override {
    f.setZero(size());
    Eigen::Matrix<double, 3, 2> vel;
    for (int k = 0; k < topo_.numElements(); ++k) {
      const auto& t = topo_.tri(k);
      const Eigen::Matrix2d Ehat = frameFrom(y, t);
      localVelocities(ctx_[k], Ehat, params_, vel);
      for (int i = 0; i < 3; ++i) {
        f[2 * t[i]] += ctx_[k].area * vel(i, 0);
        f[2 * t[i] + 1] += ctx_[k].area * vel(i, 1);
      }
    }
    for (int j = 0; j < topo_.numInterior(); ++j) {
      f[2 * j] *= scale_[j];
      f[2 * j + 1] *= scale_[j];
    }
    for (int j = topo_.numInterior(); j < topo_.numVertices(); ++j) {
      f[2 * j] = 0.0;
      f[2 * j + 1] = 0.0;
    }
  }

  void jacobian(double /*t*/, const Eigen::VectorXd& y,
                Eigen::SparseMatrix<double>& J) override {
    const int n = size();
    triplets_.clear();
    Eigen::Matrix<double, 6, 6> blk;
    for (int k = 0; k < topo_.numElements(); ++k) {
      const auto& t = topo_.tri(k);
      const Eigen::Matrix2d Ehat = frameFrom(y, t);
      localVelocityJacobian(ctx_[k], Ehat, params_, blk);
      for (int i = 0; i < 3; ++i) {
        const int vi = t[i];
        if (topo_.isBoundaryVertex(vi)) continue;  // pinned: zero rows
        // Row block of vertex vi, scaled by P/tau.
        const Eigen::Matrix<double, 2, 6> rows = ctx_[k].area * scale_[vi] *
                                                 blk.template block<2, 6>(2 * i, 0);
        for (int a = 0; a < 2; ++a) {
          for (int j = 0; j < 3; ++j) {
            for (int b = 0; b < 2; ++b) {
              triplets_.emplace_back(2 * vi + a, 2 * t[j] + b, rows(a, 2 * j + b));
            }
          }
        }
      }
    }
    J.resize(n, n);
    J.setFromTriplets(triplets_.begin(), triplets_.end());
    J.makeCompressed();
  }

  // Intermediate states may pass through degenerate configurations: the
  // energy density is polynomial in the element frames for integer p, so the
  // flow is smooth there, and only the endpoint of the relaxation window is
  // ever used.  Validity is checked on the endpoint by the caller.

private:
  static Eigen::Matrix2d frameFrom(const Eigen::VectorXd& y, const std::array<int, 3>& t) {
    Eigen::Matrix2d E;
    E(0, 0) = y[2 * t[1]] - y[2 * t[0]];
    E(1, 0) = y[2 * t[1] + 1] - y[2 * t[0] + 1];
    E(0, 1) = y[2 * t[2]] - y[2 * t[0]];
    E(1, 1) = y[2 * t[2] + 1] - y[2 * t[0] + 1];
    return E;
  }

  const TriangleMesh& topo_;
  MmpdeParams params_;
  std::vector<XiElementContext> ctx_;
  std::vector<double> scale_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

}  // namespace

XiIntegrateResult integrateXi(TriangleMesh& tc, const TriangleMesh& th,
                              const MmpdeMetric& metric, const MmpdeParams& params,
                              double dt, const XiIntegrateOptions& opts) {
  XiFlowSystem sys(tc, th, metric, params);
  RadauOptions ropts;
  ropts.rtol = opts.rtol;
  ropts.atol = opts.atol;
  ropts.h_init = opts.h_init;
  // Mesh relaxation is strongly damped but its Jacobian drifts quickly along
  // the transient; extra corrector sweeps are far cheaper than the extra
  // factorizations a rejected stage solve forces.
  ropts.max_newton_iters = 14;
  RadauIIA5 radau(sys, ropts);
  Eigen::VectorXd y = tc.positionsVector();
  XiIntegrateResult result;
  result.stats = radau.integrate(0.0, dt, y);
  // Every call restarts the same relaxation transient from the reference
  // mesh, so the best warm-start hint is the first accepted step of this
  // window, not the (much larger) final one.
  result.suggested_h =
      result.stats.first_h > 0.0 ? result.stats.first_h : radau.suggestedInitialStep();
  tc.setPositionsVector(y);
  // Only the endpoint of the relaxation window feeds the mesh map; it must be
  // a valid (positively oriented) mesh even though the transient may brush
  // through degenerate configurations.
  try {
    for (int k = 0; k < tc.numElements(); ++k) tc.elementFrame(k);
  } catch (const NonPositiveAreaError& e) {
    throw MeshTangledError(std::string("mesh motion inverted an element: ") + e.what());
  }
  return result;
}

int rebuildPhysical(const TriangleMesh& tc_new, const TriangleMesh& tc_ref,
                    const TriangleMesh& th, TriangleMesh& out) {
  out = th;
  PointLocator locator(tc_new);
  int fallbacks = 0;
  for (int j = 0; j < th.numInterior(); ++j) {
    const int hint = tc_new.patch(j).front().element;
    LocateResult loc = locator.locate(tc_ref.vertex(j), hint);
    Eigen::Vector3d bary = loc.bary;
    if (!loc.found) {
      // The reference point slipped just outside the deformed computational
      // mesh (boundary vertices slide along tangents); project back by
      // clamping the barycentric coordinates of the best candidate.
      ++fallbacks;
      bary = bary.cwiseMax(0.0);
      bary /= bary.sum();
    }
    const auto& t = th.tri(loc.element);
    out.setVertex(j, Vec2(bary[0] * th.vertex(t[0]) + bary[1] * th.vertex(t[1]) +
                          bary[2] * th.vertex(t[2])));
  }
  try {
    for (int k = 0; k < out.numElements(); ++k) out.elementFrame(k);
  } catch (const NonPositiveAreaError& e) {
    throw MeshTangledError(std::string("rebuilt physical mesh is tangled: ") + e.what());
  }
  return fallbacks;
}

}  // namespace pme
