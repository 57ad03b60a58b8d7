#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pme/geometry/mesh.hpp"

namespace pme {

// Linear-element assembly for the pressure equation on a moving mesh.  The
// semi-discrete system for the interior nodal values V is
//
//   B(X) dV/dt = F(V, X, Xdot),
//
//   F_i = int grad(v_h) . (Xdot_h phi_i - m v_h grad(phi_i)) dx
//         + (1 - m) int |grad v_h|^2 phi_i dx,
//
// with v_h = 0 on the boundary (test space = interior hat functions).  The
// full-size variants keep one row/column per vertex and are mainly useful in
// tests; interior_only drops boundary rows and columns (vertices are ordered
// interior-first, so this is the leading block).

// Consistent mass matrix: B_ij = int phi_j phi_i dx (exact closed form).
Eigen::SparseMatrix<double> assembleMassMatrix(const TriangleMesh& mesh,
                                               bool interior_only);

// Right-hand side F.  v_full has one entry per vertex (boundary entries are
// taken as-is and should be zero); xdot is the stacked nodal mesh velocity.
Eigen::VectorXd assembleForcing(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                                const Eigen::VectorXd& xdot, double m,
                                bool interior_only);

// Jacobian dF/dv of the forcing.
Eigen::SparseMatrix<double> assembleForcingJacobian(const TriangleMesh& mesh,
                                                    const Eigen::VectorXd& v_full,
                                                    const Eigen::VectorXd& xdot, double m,
                                                    bool interior_only);

}  // namespace pme
