#include "pme/exact/norms.hpp"

#include <cmath>

#include "pme/fem/quadrature.hpp"

namespace pme {

ErrorNorms computeErrorNorms(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                             const BarenblattPattle& exact, double t) {
  if (v_full.size() != mesh.numVertices()) {
    throw Error("computeErrorNorms: field size mismatch");
  }
  ErrorNorms norms;
  const TriQuadrature& rule = TriQuadrature::degree6();
  double l2v = 0.0, l2u = 0.0;
  for (int k = 0; k < mesh.numElements(); ++k) {
    const auto& tri = mesh.tri(k);
    const Eigen::Vector3d vk(v_full[tri[0]], v_full[tri[1]], v_full[tri[2]]);
    const double area = mesh.elementArea(k);
    const Vec2& p0 = mesh.vertex(tri[0]);
    const Vec2& p1 = mesh.vertex(tri[1]);
    const Vec2& p2 = mesh.vertex(tri[2]);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Eigen::Vector3d& l = rule.points[q];
      const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
      const double w = rule.weights[q] * area;
      const double vh = l.dot(vk);
      const double ve = exact.value(x, t);
      const double ev = vh - ve;
      const double uh = uFromV(std::max(vh, 0.0), exact.m);
      const double ue = uFromV(ve, exact.m);
      const double eu = uh - ue;
      norms.l1_v += w * std::abs(ev);
      l2v += w * ev * ev;
      norms.l1_u += w * std::abs(eu);
      l2u += w * eu * eu;
    }
  }
  norms.l2_v = std::sqrt(l2v);
  norms.l2_u = std::sqrt(l2u);
  const double R = exact.supportRadius(t);
  for (int v = mesh.numInterior(); v < mesh.numVertices(); ++v) {
    norms.linf_boundary =
        std::max(norms.linf_boundary, std::abs(mesh.vertex(v).norm() - R));
  }
  return norms;
}

}  // namespace pme
