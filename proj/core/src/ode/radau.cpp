#include "pme/ode/radau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace pme {

namespace {

using Eigen::VectorXd;
using Cplx = std::complex<double>;

double scaledRms(const VectorXd& v, const VectorXd& sc) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double q = v[i] / sc[i];
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

void RadauStats::accumulate(const RadauStats& o) {
  steps += o.steps;
  accepted += o.accepted;
  rejected_error += o.rejected_error;
  rejected_newton += o.rejected_newton;
  rejected_veto += o.rejected_veto;
  rhs_evals += o.rhs_evals;
  jacobians += o.jacobians;
  factorizations += o.factorizations;
  newton_iters += o.newton_iters;
  last_h = o.last_h;
  if (first_h == 0.0) first_h = o.first_h;
}

struct RadauIIA5::Tableau {
  Eigen::Vector3d c;
  Eigen::Matrix3d A;
  Eigen::Matrix3d Ainv;
  Eigen::Matrix3d T;     // A^{-1} = T * blkdiag(gamma, [[alpha, beta], [-beta, alpha]]) * T^{-1}
  Eigen::Matrix3d Tinv;
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma0 = 0.0;   // weight of the explicit f(t0, y0) term in the embedded estimate
  Eigen::Vector3d d;     // embedded-difference weights applied to the stage offsets Z
};

const RadauIIA5::Tableau& RadauIIA5::tableau() {
  static const Tableau tab = [] {
    Tableau t;
    const double s6 = std::sqrt(6.0);
    t.c << (4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0;
    t.A << (88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0,
        (296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0,
        (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
    t.Ainv = t.A.inverse();

    Eigen::EigenSolver<Eigen::Matrix3d> es(t.Ainv);
    int re_idx = -1, cx_idx = -1;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(es.eigenvalues()[i].imag()) < 1e-12) {
        re_idx = i;
      } else if (cx_idx < 0 && es.eigenvalues()[i].imag() > 0.0) {
        cx_idx = i;
      }
    }
    if (re_idx < 0 || cx_idx < 0) {
      throw Error("radau tableau: unexpected eigenstructure");
    }
    t.gamma = es.eigenvalues()[re_idx].real();
    t.alpha = es.eigenvalues()[cx_idx].real();
    t.beta = es.eigenvalues()[cx_idx].imag();

    Eigen::Vector3d vr = es.eigenvectors().col(re_idx).real();
    vr.normalize();
    Eigen::Vector3cd vc = es.eigenvectors().col(cx_idx);
    vc.normalize();
    t.T.col(0) = vr;
    t.T.col(1) = vc.real();
    t.T.col(2) = vc.imag();
    t.Tinv = t.T.inverse();

    Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
    S(0, 0) = t.gamma;
    S(1, 1) = t.alpha;
    S(1, 2) = t.beta;
    S(2, 1) = -t.beta;
    S(2, 2) = t.alpha;
    if ((t.T * S * t.Tinv - t.Ainv).norm() > 1e-11 * t.Ainv.norm()) {
      throw Error("radau tableau: eigendecomposition self-check failed");
    }

    // Embedded order-3 companion: quadrature over nodes {0, c1, c2, c3} with
    // the weight of node 0 fixed to 1/gamma; the remaining weights match
    // integral t^{q-1} for q = 1..3.  The estimate of y1_hat - y1 then reads
    // gamma0 * h * f(t0, y0) + sum_i d_i Z_i.
    t.gamma0 = 1.0 / t.gamma;
    Eigen::Matrix3d V;
    Eigen::Vector3d rhs;
    for (int q = 1; q <= 3; ++q) {
      for (int j = 0; j < 3; ++j) V(q - 1, j) = std::pow(t.c[j], q - 1);
      rhs[q - 1] = 1.0 / q - (q == 1 ? t.gamma0 : 0.0);
    }
    const Eigen::Vector3d bhat = V.fullPivLu().solve(rhs);
    const Eigen::Vector3d b = t.A.row(2).transpose();
    t.d = t.Ainv.transpose() * (bhat - b);
    return t;
  }();
  return tab;
}

RadauIIA5::RadauIIA5(ImplicitOdeSystem& system, RadauOptions options)
    : sys_(system), opts_(options) {}

void RadauIIA5::computeIterationMatrix(double gamma_h, double alpha_h, double beta_h) {
  if (!pattern_ready_) {
    Ere_ = gamma_h * B_ - J_;
    Ere_.makeCompressed();
    Ecx_ = Ere_.cast<Cplx>();
    Ecx_.makeCompressed();

    // Map every nonzero of B and J to its slot in the merged pattern so later
    // refills are a linear scatter instead of a sparse sum.
    auto build_map = [&](const Eigen::SparseMatrix<double>& M, std::vector<int>& map) {
      map.resize(M.nonZeros());
      int pos = 0;
      for (int col = 0; col < M.outerSize(); ++col) {
        const int lo = Ere_.outerIndexPtr()[col];
        const int hi = Ere_.outerIndexPtr()[col + 1];
        for (Eigen::SparseMatrix<double>::InnerIterator it(M, col); it; ++it) {
          const int* base = Ere_.innerIndexPtr();
          const int* found = std::lower_bound(base + lo, base + hi, it.row());
          if (found == base + hi || *found != it.row()) {
            throw Error("radau: pattern map inconsistency");
          }
          map[pos++] = static_cast<int>(found - base);
        }
      }
    };
    build_map(B_, mapB_);
    build_map(J_, mapJ_);
    lu_re_.analyzePattern(Ere_);
    lu_cx_.analyzePattern(Ecx_);
    pattern_ready_ = true;
  }

  double* re = Ere_.valuePtr();
  Cplx* cx = Ecx_.valuePtr();
  const auto nnz = Ere_.nonZeros();
  std::fill(re, re + nnz, 0.0);
  std::fill(cx, cx + nnz, Cplx(0.0, 0.0));
  const double* bv = B_.valuePtr();
  for (Eigen::Index k = 0; k < B_.nonZeros(); ++k) {
    re[mapB_[k]] += gamma_h * bv[k];
    cx[mapB_[k]] += Cplx(alpha_h * bv[k], -beta_h * bv[k]);
  }
  const double* jv = J_.valuePtr();
  for (Eigen::Index k = 0; k < J_.nonZeros(); ++k) {
    re[mapJ_[k]] -= jv[k];
    cx[mapJ_[k]] -= jv[k];
  }
  lu_re_.factorize(Ere_);
  if (lu_re_.info() != Eigen::Success) {
    throw IntegratorFailureError("radau: real iteration matrix is singular");
  }
  lu_cx_.factorize(Ecx_);
  if (lu_cx_.info() != Eigen::Success) {
    throw IntegratorFailureError("radau: complex iteration matrix is singular");
  }
}

RadauStats RadauIIA5::integrate(double t0, double t1, VectorXd& y) {
  const Tableau& tab = tableau();
  RadauStats st;
  const int n = sys_.size();
  const double span = t1 - t0;
  if (span <= 0.0 || n == 0) return st;
  const double hmin = opts_.h_min_rel * span;
  const double fnewt =
      std::max(10.0 * std::numeric_limits<double>::epsilon() / opts_.rtol,
               std::min(0.03, std::sqrt(opts_.rtol)));

  double t = t0;
  double h = opts_.h_init > 0.0 ? std::min(opts_.h_init, span) : 0.02 * span;
  h = std::max(h, hmin);

  VectorXd sc(n);
  auto refresh_scale = [&] {
    for (int i = 0; i < n; ++i) sc[i] = opts_.atol + opts_.rtol * std::abs(y[i]);
  };
  refresh_scale();

  std::array<VectorXd, 3> Z, F, BZ;
  for (auto& z : Z) z = VectorXd::Zero(n);
  for (auto& f : F) f = VectorXd::Zero(n);
  for (auto& b : BZ) b = VectorXd::Zero(n);
  VectorXd f0(n), tmp(n), est(n), rt1(n), rt2(n), rt3(n);
  Eigen::VectorXcd zc(n), rc(n);

  // Warm-start data from the previous accepted step.
  bool have_warm = false;
  double warm_hold = 0.0;
  std::array<VectorXd, 3> Zold;

  bool have_jac = false;
  bool jac_at_current = false;  // Jacobian evaluated at the current (t, y)
  bool have_fact = false;
  double fact_h = -1.0;
  bool have_f0 = false;
  bool first_step = true;
  bool last_rejected = false;
  int consecutive_newton_fail = 0;

  while (t < t1 - 1e-14 * span) {
    if (++st.steps > opts_.max_steps) {
      throw IntegratorFailureError("radau: step budget exhausted");
    }
    if (t + 1.01 * h >= t1) h = t1 - t;
    if (h < hmin) {
      throw IntegratorFailureError("radau: step size underflow");
    }

    if (!have_jac) {
      sys_.massMatrix(t, B_);
      sys_.jacobian(t, y, J_);
      ++st.jacobians;
      have_jac = true;
      jac_at_current = true;
      have_fact = false;
    }
    if (!have_fact || fact_h != h) {
      computeIterationMatrix(tab.gamma / h, tab.alpha / h, tab.beta / h);
      ++st.factorizations;
      have_fact = true;
      fact_h = h;
    }
    if (!have_f0) {
      sys_.rhs(t, y, f0);
      ++st.rhs_evals;
      have_f0 = true;
    }

    // Initial stage guess: extrapolate the previous collocation polynomial.
    if (have_warm) {
      for (int i = 0; i < 3; ++i) {
        const double s = 1.0 + tab.c[i] * h / warm_hold;
        // Lagrange interpolation over nodes {0, c1, c2, c3} with values
        // {0, Zold}; subtract the value at s = 1 so offsets are relative to y.
        auto eval = [&](double x) {
          VectorXd acc = VectorXd::Zero(n);
          for (int j = 0; j < 3; ++j) {
            double w = x / tab.c[j];  // node 0 factor
            for (int l = 0; l < 3; ++l) {
              if (l == j) continue;
              w *= (x - tab.c[l]) / (tab.c[j] - tab.c[l]);
            }
            acc += w * Zold[j];
          }
          return acc;
        };
        Z[i] = eval(s) - Zold[2];
      }
    } else {
      for (auto& z : Z) z.setZero();
    }

    // Simplified Newton on the transformed stage system.
    bool converged = false;
    double dnorm_prev = -1.0;
    double theta_last = 0.0;  // final observed contraction rate
    int iters = 0;
    for (int k = 0; k < opts_.max_newton_iters; ++k) {
      iters = k + 1;
      ++st.newton_iters;
      for (int i = 0; i < 3; ++i) {
        const double ti = t + tab.c[i] * h;
        tmp = y + Z[i];
        sys_.rhs(ti, tmp, F[i]);
        ++st.rhs_evals;
        sys_.applyMass(ti, Z[i], BZ[i]);
      }
      // Residual R_i = (1/h) sum_j Ainv(i,j) B(t_j) Z_j - f_i, then rows are
      // combined with Tinv.
      rt1.setZero();
      rt2.setZero();
      rt3.setZero();
      for (int i = 0; i < 3; ++i) {
        tmp = (tab.Ainv(i, 0) * BZ[0] + tab.Ainv(i, 1) * BZ[1] + tab.Ainv(i, 2) * BZ[2]) / h -
              F[i];
        rt1 += tab.Tinv(0, i) * tmp;
        rt2 += tab.Tinv(1, i) * tmp;
        rt3 += tab.Tinv(2, i) * tmp;
      }

      const VectorXd dw1 = lu_re_.solve(-rt1);
      for (int i = 0; i < n; ++i) rc[i] = Cplx(-rt2[i], -rt3[i]);
      zc = lu_cx_.solve(rc);

      double dnorm = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dz1 = tab.T(0, 0) * dw1[i] + tab.T(0, 1) * zc[i].real() + tab.T(0, 2) * zc[i].imag();
        const double dz2 = tab.T(1, 0) * dw1[i] + tab.T(1, 1) * zc[i].real() + tab.T(1, 2) * zc[i].imag();
        const double dz3 = tab.T(2, 0) * dw1[i] + tab.T(2, 1) * zc[i].real() + tab.T(2, 2) * zc[i].imag();
        Z[0][i] += dz1;
        Z[1][i] += dz2;
        Z[2][i] += dz3;
        const double q1 = dz1 / sc[i], q2 = dz2 / sc[i], q3 = dz3 / sc[i];
        dnorm += q1 * q1 + q2 * q2 + q3 * q3;
      }
      dnorm = std::sqrt(dnorm / (3.0 * n));
      if (!std::isfinite(dnorm)) break;

      if (k == 0) {
        if (dnorm <= 0.01 * fnewt) {
          converged = true;
          break;
        }
      } else {
        const double theta = dnorm / dnorm_prev;
        theta_last = theta;
        if (theta >= 0.99) break;  // diverging
        const double eta = theta / (1.0 - theta);
        if (eta * dnorm <= fnewt) {
          converged = true;
          break;
        }
      }
      dnorm_prev = dnorm;
    }

    if (!converged) {
      ++st.rejected_newton;
      last_rejected = true;
      // A stale Jacobian gets refreshed first; otherwise halve the step.
      if (!jac_at_current) {
        have_jac = false;
        continue;
      }
      if (++consecutive_newton_fail > opts_.max_newton_halvings) {
        throw NewtonDivergenceError("radau: stage solver failed after " +
                                    std::to_string(opts_.max_newton_halvings) +
                                    " step halvings");
      }
      h *= 0.5;
      have_fact = false;
      continue;
    }

    // Embedded error estimate, smoothed by the real iteration matrix.
    tmp = tab.d[0] * Z[0] + tab.d[1] * Z[1] + tab.d[2] * Z[2];
    est = tab.gamma0 * h * f0 + B_ * tmp;
    est = (tab.gamma / h) * lu_re_.solve(est);
    double err = scaledRms(est, sc);
    if (err >= 1.0 && (first_step || last_rejected)) {
      // Re-filter with f evaluated at the perturbed state (helps stiff
      // transients where the raw estimate is pessimistic).
      rt1 = y + est;
      sys_.rhs(t, rt1, rt2);
      ++st.rhs_evals;
      est = tab.gamma0 * h * rt2 + B_ * tmp;
      est = (tab.gamma / h) * lu_re_.solve(est);
      err = scaledRms(est, sc);
    }

    if (!std::isfinite(err) || err >= 1.0) {
      ++st.rejected_error;
      last_rejected = true;
      double fac = opts_.safety * std::pow(std::max(err, 1e-10), -0.25);
      fac = std::clamp(fac, opts_.min_shrink, 1.0);
      h *= fac;
      have_fact = false;
      continue;
    }

    // Candidate accepted by the error control; let the system veto.
    tmp = y + Z[2];
    if (!sys_.acceptState(t + h, tmp)) {
      ++st.rejected_veto;
      last_rejected = true;
      h *= 0.5;
      have_fact = false;
      continue;
    }

    // Accept.
    consecutive_newton_fail = 0;
    t += h;
    y = tmp;
    if (!y.allFinite()) {
      throw IntegratorFailureError("radau: non-finite state after accepted step");
    }
    ++st.accepted;
    if (st.accepted == 1) st.first_h = h;
    Zold = Z;
    warm_hold = h;
    have_warm = true;
    warm_h_ = h;
    st.last_h = h;
    refresh_scale();
    have_f0 = false;

    double fac = opts_.safety * (2.0 * opts_.max_newton_iters + 1.0) /
                 (2.0 * opts_.max_newton_iters + iters) *
                 std::pow(std::max(err, 1e-10), -0.25);
    fac = std::clamp(fac, opts_.min_shrink, last_rejected ? 1.0 : opts_.max_growth);
    last_rejected = false;
    first_step = false;
    const double h_new = h * fac;
    // Only a sharply contracting stage solver (theta ~ 0, so the iteration
    // matrix is essentially exact) leaves the embedded estimate clean enough
    // to trust near the tolerance; a sluggish one must trigger a fresh
    // Jacobian or the leftover iteration error masquerades as local error
    // and pins the controller.
    const bool newton_sharp = theta_last <= 1e-3;  // true for iters == 1 too
    if (newton_sharp && fac >= 1.0 && fac <= 1.2) {
      // Freeze the step size so the factorization and Jacobian carry over.
      jac_at_current = false;
    } else {
      h = h_new;
      have_fact = false;
      if (newton_sharp) {
        jac_at_current = false;  // keep the Jacobian across the size change
      } else {
        have_jac = false;
      }
    }
  }
  return st;
}

}  // namespace pme
