#include <cmath>

#include <gtest/gtest.h>

#include "pme/ode/radau.hpp"

namespace pme {
namespace {

// Scalar linear decay y' = a y, dense-free test system.
class DecaySystem : public ImplicitOdeSystem {
public:
  explicit DecaySystem(double a) : a_(a) {}
  int size() const override { return 1; }
  void rhs(double, const Eigen::VectorXd& y, Eigen::VectorXd& f) override {
    f.resize(1);
    f[0] = a_ * y[0];
  }
  void jacobian(double, const Eigen::VectorXd&, Eigen::SparseMatrix<double>& J) override {
    J.resize(1, 1);
    J.coeffRef(0, 0) = a_;
  }

private:
  double a_;
};

// Stiff relaxation toward a slow manifold: y' = lambda (y - g(t)) + g'(t)
// with exact solution y = g(t) + (y0 - g(0)) e^{lambda t}.
class ProtheroRobinson : public ImplicitOdeSystem {
public:
  explicit ProtheroRobinson(double lambda) : lambda_(lambda) {}
  static double g(double t) { return std::sin(t); }
  static double gdot(double t) { return std::cos(t); }
  int size() const override { return 1; }
  void rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& f) override {
    f.resize(1);
    f[0] = lambda_ * (y[0] - g(t)) + gdot(t);
  }
  void jacobian(double, const Eigen::VectorXd&, Eigen::SparseMatrix<double>& J) override {
    J.resize(1, 1);
    J.coeffRef(0, 0) = lambda_;
  }

private:
  double lambda_;
};

// Two-dimensional system with a constant nontrivial mass matrix:
// B y' = B A y, so the solution is still exp(A t) y0.
class MassedRotation : public ImplicitOdeSystem {
public:
  MassedRotation() {
    B_.resize(2, 2);
    B_.insert(0, 0) = 2.0;
    B_.insert(0, 1) = 1.0;
    B_.insert(1, 0) = 1.0;
    B_.insert(1, 1) = 2.0;
    B_.makeCompressed();
    A_ << 0.0, 1.0, -1.0, 0.0;  // rotation generator
  }
  int size() const override { return 2; }
  void rhs(double, const Eigen::VectorXd& y, Eigen::VectorXd& f) override {
    f = B_ * (A_ * y);
  }
  void applyMass(double, const Eigen::VectorXd& v, Eigen::VectorXd& out) override {
    out = B_ * v;
  }
  void massMatrix(double, Eigen::SparseMatrix<double>& B) override { B = B_; }
  void jacobian(double, const Eigen::VectorXd&, Eigen::SparseMatrix<double>& J) override {
    J = B_ * A_.sparseView();
    J.makeCompressed();
  }

private:
  Eigen::SparseMatrix<double> B_;
  Eigen::Matrix2d A_;
};

TEST(RadauIIA5, SmoothDecayHitsTolerance) {
  DecaySystem sys(-1.0);
  RadauOptions opts;
  opts.rtol = 1e-8;
  opts.atol = 1e-10;
  RadauIIA5 solver(sys, opts);
  Eigen::VectorXd y(1);
  y[0] = 1.0;
  const RadauStats st = solver.integrate(0.0, 1.0, y);
  EXPECT_NEAR(y[0], std::exp(-1.0), 5e-8);
  EXPECT_GT(st.accepted, 0);
  EXPECT_EQ(st.steps, st.accepted + st.rejected_error + st.rejected_newton + st.rejected_veto);
}

TEST(RadauIIA5, TighterToleranceGivesSmallerError) {
  double errors[2];
  int idx = 0;
  for (double rtol : {1e-4, 1e-8}) {
    DecaySystem sys(-2.0);
    RadauOptions opts;
    opts.rtol = rtol;
    opts.atol = rtol * 1e-2;
    RadauIIA5 solver(sys, opts);
    Eigen::VectorXd y(1);
    y[0] = 1.0;
    solver.integrate(0.0, 1.0, y);
    errors[idx++] = std::abs(y[0] - std::exp(-2.0));
  }
  EXPECT_LT(errors[1], errors[0]);
  EXPECT_LT(errors[1], 1e-7);
}

TEST(RadauIIA5, StiffProblemTakesFewSteps) {
  // L-stable implicit methods resolve the slow manifold without tracking the
  // fast 1e6-rate transient step-by-step.
  ProtheroRobinson sys(-1e6);
  RadauOptions opts;
  opts.rtol = 1e-6;
  opts.atol = 1e-9;
  RadauIIA5 solver(sys, opts);
  Eigen::VectorXd y(1);
  y[0] = 0.5;  // off the manifold: g(0) = 0
  const RadauStats st = solver.integrate(0.0, 1.0, y);
  EXPECT_NEAR(y[0], std::sin(1.0), 1e-5);
  EXPECT_LT(st.steps, 500);  // an explicit method would need ~1e6 steps
}

TEST(RadauIIA5, NontrivialMassMatrix) {
  MassedRotation sys;
  RadauOptions opts;
  opts.rtol = 1e-9;
  opts.atol = 1e-11;
  RadauIIA5 solver(sys, opts);
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  solver.integrate(0.0, M_PI / 2.0, y);
  // exp(A pi/2) rotates (1,0) to (0,-1).
  EXPECT_NEAR(y[0], 0.0, 1e-7);
  EXPECT_NEAR(y[1], -1.0, 1e-7);
}

TEST(RadauIIA5, WarmStartSuggestsReasonableStep) {
  DecaySystem sys(-1.0);
  RadauOptions opts;
  RadauIIA5 solver(sys, opts);
  Eigen::VectorXd y(1);
  y[0] = 1.0;
  const RadauStats st = solver.integrate(0.0, 0.5, y);
  EXPECT_GT(solver.suggestedInitialStep(), 0.0);
  EXPECT_GT(st.first_h, 0.0);
  EXPECT_GT(st.last_h, 0.0);
}

TEST(RadauIIA5, StepBudgetExhaustionThrows) {
  ProtheroRobinson sys(-1e6);
  RadauOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-13;
  opts.max_steps = 3;
  RadauIIA5 solver(sys, opts);
  Eigen::VectorXd y(1);
  y[0] = 0.5;
  EXPECT_THROW(solver.integrate(0.0, 1.0, y), IntegratorFailureError);
}

TEST(RadauIIA5, HonorsInitialStepHint) {
  DecaySystem sys(-1.0);
  RadauOptions opts;
  opts.h_init = 1e-3;
  RadauIIA5 solver(sys, opts);
  Eigen::VectorXd y(1);
  y[0] = 1.0;
  const RadauStats st = solver.integrate(0.0, 1.0, y);
  EXPECT_NEAR(st.first_h, 1e-3, 1e-9);  // smooth problem: the hint is accepted
  EXPECT_NEAR(y[0], std::exp(-1.0), 1e-5);
}

}  // namespace
}  // namespace pme
