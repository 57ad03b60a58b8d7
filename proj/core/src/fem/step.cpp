#include "pme/fem/step.hpp"

#include <list>
#include <utility>

#include "pme/fem/assembly.hpp"

namespace pme {

namespace {

// ODE view of the moving-mesh pressure system over one slab.  Geometry and
// the interior mass matrix are cached per evaluation time; the stage times
// repeat across Newton iterations, so a small cache avoids most recomputation.
class SlabSystem final : public ImplicitOdeSystem {
public:
  SlabSystem(const MeshTrajectory& traj, double m)
      : traj_(traj), scratch_(*traj.topology), m_(m), xdot_(traj.velocity()) {
    n_int_ = scratch_.numInterior();
    n_all_ = scratch_.numVertices();
  }

  int size() const override { return n_int_; }

  void rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& f) override {
    const Entry& e = at(t);
    scratch_.setPositionsVector(e.positions);
    f = assembleForcing(scratch_, fullField(y), xdot_, m_, true);
  }

  void applyMass(double t, const Eigen::VectorXd& v, Eigen::VectorXd& out) override {
    out = at(t).mass * v;
  }

  void massMatrix(double t, Eigen::SparseMatrix<double>& B) override {
    B = at(t).mass;
  }

  void jacobian(double t, const Eigen::VectorXd& y,
                Eigen::SparseMatrix<double>& J) override {
    scratch_.setPositionsVector(at(t).positions);
    J = assembleForcingJacobian(scratch_, fullField(y), xdot_, m_, true);
  }

private:
  struct Entry {
    double t;
    Eigen::VectorXd positions;
    Eigen::SparseMatrix<double> mass;
  };

  const Entry& at(double t) {
    for (auto it = cache_.begin(); it != cache_.end(); ++it) {
      if (it->t == t) {
        cache_.splice(cache_.begin(), cache_, it);
        return cache_.front();
      }
    }
    Entry e;
    e.t = t;
    e.positions = traj_.positionsAt(t);
    scratch_.setPositionsVector(e.positions);
    e.mass = assembleMassMatrix(scratch_, true);
    cache_.push_front(std::move(e));
    if (cache_.size() > 8) cache_.pop_back();
    return cache_.front();
  }

  Eigen::VectorXd fullField(const Eigen::VectorXd& y) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_all_);
    v.head(n_int_) = y;
    return v;
  }

  const MeshTrajectory& traj_;
  TriangleMesh scratch_;
  double m_;
  Eigen::VectorXd xdot_;
  int n_int_ = 0;
  int n_all_ = 0;
  std::list<Entry> cache_;
};

}  // namespace

PhysicalStepResult stepPhysical(const Eigen::VectorXd& v_start,
                                const MeshTrajectory& traj, double m,
                                const PhysicalStepOptions& opts) {
  if (traj.topology == nullptr || traj.t_end <= traj.t_start) {
    throw Error("stepPhysical: invalid trajectory");
  }
  if (v_start.size() != traj.topology->numVertices()) {
    throw Error("stepPhysical: field size mismatch");
  }
  SlabSystem sys(traj, m);
  RadauOptions ropts;
  ropts.rtol = opts.rtol;
  ropts.atol = opts.atol;
  ropts.h_init = opts.h_init;
  RadauIIA5 radau(sys, ropts);

  Eigen::VectorXd y = v_start.head(traj.topology->numInterior());
  PhysicalStepResult result;
  result.stats = radau.integrate(traj.t_start, traj.t_end, y);
  result.suggested_h = radau.suggestedInitialStep();
  result.v = Eigen::VectorXd::Zero(traj.topology->numVertices());
  result.v.head(traj.topology->numInterior()) = y;
  return result;
}

}  // namespace pme
