#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pme/errors.hpp"

namespace pme {

// Implicitly-massed ODE system  B(t, y) y' = f(t, y)  with sparse Jacobians.
// B may depend on t (it is evaluated at the stage times in the residual) but
// the iteration matrix freezes B and df/dy at the step start, which is the
// usual simplified-Newton treatment for slowly varying mass matrices.
class ImplicitOdeSystem {
public:
  virtual ~ImplicitOdeSystem() = default;

  virtual int size() const = 0;
  virtual void rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& f) = 0;

  // out = B(t) * v.  Default: identity mass.
  virtual void applyMass(double t, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    out = v;
  }
  // Assemble B(t).  Default: identity.
  virtual void massMatrix(double t, Eigen::SparseMatrix<double>& B) {
    B.resize(size(), size());
    B.setIdentity();
  }
  virtual void jacobian(double t, const Eigen::VectorXd& y,
                        Eigen::SparseMatrix<double>& J) = 0;

  // Veto hook: called with each accepted candidate state; returning false
  // rejects the step and retries with half the step size.
  virtual bool acceptState(double t, const Eigen::VectorXd& y) {
    (void)t;
    (void)y;
    return true;
  }
};

struct RadauOptions {
  double rtol = 1e-6;
  double atol = 1e-8;
  double h_init = 0.0;       // <= 0: start from 2% of the interval
  double h_min_rel = 1e-14;  // minimum step relative to the interval
  int max_steps = 2000000;
  int max_newton_iters = 7;
  int max_newton_halvings = 10;  // consecutive Newton failures allowed
  double safety = 0.9;
  double max_growth = 8.0;
  double min_shrink = 0.125;
};

struct RadauStats {
  long steps = 0;
  long accepted = 0;
  long rejected_error = 0;
  long rejected_newton = 0;
  long rejected_veto = 0;
  long rhs_evals = 0;
  long jacobians = 0;
  long factorizations = 0;
  long newton_iters = 0;
  double last_h = 0.0;
  double first_h = 0.0;  // first accepted step length of the window

  void accumulate(const RadauStats& o);
};

// Three-stage Radau IIA collocation (classical order 5, stiffly accurate,
// L-stable) with simplified Newton stage solves.  The 3n-dimensional stage
// system is block-diagonalized into one real and one complex n-dimensional
// solve per iteration via the eigendecomposition of the inverse Butcher
// matrix.  Error control uses the embedded order-3 estimate smoothed by the
// real iteration matrix.
class RadauIIA5 {
public:
  RadauIIA5(ImplicitOdeSystem& system, RadauOptions options);

  // Advance y from t0 to t1 in place.  Throws NewtonDivergenceError when the
  // stage solver keeps failing, IntegratorFailureError on step-size underflow
  // or step-budget exhaustion.
  RadauStats integrate(double t0, double t1, Eigen::VectorXd& y);

  // Suggested initial step for a follow-up call (persisted warm start).
  double suggestedInitialStep() const { return warm_h_; }

private:
  struct Tableau;
  static const Tableau& tableau();

  void computeIterationMatrix(double gamma_h, double alpha_h, double beta_h);

  ImplicitOdeSystem& sys_;
  RadauOptions opts_;
  double warm_h_ = 0.0;

  // Iteration-matrix machinery (patterns fixed after first assembly).
  Eigen::SparseMatrix<double> B_, J_;
  Eigen::SparseMatrix<double> Ere_;
  Eigen::SparseMatrix<std::complex<double>> Ecx_;
  std::vector<int> mapB_, mapJ_;  // nnz index maps into Ere_/Ecx_ value arrays
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_re_;
  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu_cx_;
  bool pattern_ready_ = false;
};

}  // namespace pme
