#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pme/geometry/mesh.hpp"

namespace pme {

// Symmetric Gaussian quadrature on the reference triangle, stored in
// barycentric coordinates with weights summing to one, so that
//   integral over K of f  =  area(K) * sum_q w_q f(x_q).
struct TriQuadrature {
  std::vector<Eigen::Vector3d> points;  // (l0, l1, l2)
  std::vector<double> weights;

  static const TriQuadrature& degree2();  // 3 points
  static const TriQuadrature& degree4();  // 6 points
  static const TriQuadrature& degree6();  // 12 points
};

// Integrate f(x, lambda) over one element with the given rule.
template <typename F>
double integrateOnElement(const TriangleMesh& mesh, int k, const TriQuadrature& rule,
                          F&& f) {
  const auto& t = mesh.tri(k);
  const Vec2& p0 = mesh.vertex(t[0]);
  const Vec2& p1 = mesh.vertex(t[1]);
  const Vec2& p2 = mesh.vertex(t[2]);
  const double area = mesh.elementArea(k);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Eigen::Vector3d& l = rule.points[q];
    const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
    acc += rule.weights[q] * f(x, l);
  }
  return area * acc;
}

}  // namespace pme
