#include "pme/fem/assembly.hpp"

#include <vector>

#include "pme/fem/quadrature.hpp"

namespace pme {

namespace {

void checkSizes(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                const Eigen::VectorXd& xdot) {
  if (v_full.size() != mesh.numVertices()) {
    throw Error("assembly: field size mismatch");
  }
  if (xdot.size() != 2 * mesh.numVertices()) {
    throw Error("assembly: mesh velocity size mismatch");
  }
}

}  // namespace

Eigen::SparseMatrix<double> assembleMassMatrix(const TriangleMesh& mesh,
                                               bool interior_only) {
  const int n = interior_only ? mesh.numInterior() : mesh.numVertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.numElements());
  for (int k = 0; k < mesh.numElements(); ++k) {
    const double area = mesh.elementArea(k);
    const auto& t = mesh.tri(k);
    for (int i = 0; i < 3; ++i) {
      if (t[i] >= n) continue;
      for (int j = 0; j < 3; ++j) {
        if (t[j] >= n) continue;
        trips.emplace_back(t[i], t[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  Eigen::SparseMatrix<double> B(n, n);
  B.setFromTriplets(trips.begin(), trips.end());
  B.makeCompressed();
  return B;
}

Eigen::VectorXd assembleForcing(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                                const Eigen::VectorXd& xdot, double m,
                                bool interior_only) {
  checkSizes(mesh, v_full, xdot);
  const int n = interior_only ? mesh.numInterior() : mesh.numVertices();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
  const TriQuadrature& rule = TriQuadrature::degree4();
  for (int k = 0; k < mesh.numElements(); ++k) {
    const ElementFrame f = mesh.elementFrame(k);
    const Eigen::Matrix<double, 3, 2> g = f.gradLambda();
    const auto& t = mesh.tri(k);
    const Eigen::Vector3d vk(v_full[t[0]], v_full[t[1]], v_full[t[2]]);
    const Vec2 gradv = g.transpose() * vk;
    const double grad2 = gradv.squaredNorm();
    Eigen::Matrix<double, 3, 2> w;
    for (int i = 0; i < 3; ++i) {
      w.row(i) << xdot[2 * t[i]], xdot[2 * t[i] + 1];
    }
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Eigen::Vector3d& l = rule.points[q];
      const double wq = rule.weights[q] * f.area;
      const double vq = l.dot(vk);
      const Vec2 Wq = w.transpose() * l;
      const double adv = gradv.dot(Wq);
      for (int i = 0; i < 3; ++i) {
        if (t[i] >= n) continue;
        F[t[i]] += wq * (adv * l[i] - m * vq * gradv.dot(g.row(i)) +
                         (1.0 - m) * grad2 * l[i]);
      }
    }
  }
  return F;
}

Eigen::SparseMatrix<double> assembleForcingJacobian(const TriangleMesh& mesh,
                                                    const Eigen::VectorXd& v_full,
                                                    const Eigen::VectorXd& xdot, double m,
                                                    bool interior_only) {
  checkSizes(mesh, v_full, xdot);
  const int n = interior_only ? mesh.numInterior() : mesh.numVertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.numElements());
  const TriQuadrature& rule = TriQuadrature::degree4();
  for (int k = 0; k < mesh.numElements(); ++k) {
    const ElementFrame f = mesh.elementFrame(k);
    const Eigen::Matrix<double, 3, 2> g = f.gradLambda();
    const auto& t = mesh.tri(k);
    const Eigen::Vector3d vk(v_full[t[0]], v_full[t[1]], v_full[t[2]]);
    const Vec2 gradv = g.transpose() * vk;
    Eigen::Matrix<double, 3, 2> w;
    for (int i = 0; i < 3; ++i) {
      w.row(i) << xdot[2 * t[i]], xdot[2 * t[i] + 1];
    }
    Eigen::Matrix3d blk = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Eigen::Vector3d& l = rule.points[q];
      const double wq = rule.weights[q] * f.area;
      const double vq = l.dot(vk);
      const Vec2 Wq = w.transpose() * l;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          blk(i, j) += wq * (g.row(j).dot(Wq) * l[i] -
                             m * (l[j] * gradv.dot(g.row(i)) + vq * g.row(j).dot(g.row(i))) +
                             2.0 * (1.0 - m) * gradv.dot(g.row(j)) * l[i]);
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (t[i] >= n) continue;
      for (int j = 0; j < 3; ++j) {
        if (t[j] >= n) continue;
        trips.emplace_back(t[i], t[j], blk(i, j));
      }
    }
  }
  Eigen::SparseMatrix<double> J(n, n);
  J.setFromTriplets(trips.begin(), trips.end());
  J.makeCompressed();
  return J;
}

}  // namespace pme
