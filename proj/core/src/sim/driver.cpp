#include "pme/sim/driver.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pme/boundary/tracker.hpp"
#include "pme/exact/norms.hpp"
#include "pme/exact/solutions.hpp"
#include "pme/fem/step.hpp"
#include "pme/geometry/mesh_io.hpp"
#include "pme/metric/metric.hpp"
#include "pme/mmpde/xi_integrator.hpp"
#include "pme/sim/mesh_gen.hpp"

namespace pme {

TriangleMesh makeInitialMesh(const SimulationConfig& config) {
  switch (config.example) {
    case ProblemKind::Bp:
    case ProblemKind::Waiting:
      return generateDiskMesh(config.supportRadiusAtStart(), config.target_elements);
    case ProblemKind::Complex:
      return generateComplexSupportMesh(config.target_elements);
  }
  throw ConfigError("unknown example kind");
}

Eigen::VectorXd initialField(const SimulationConfig& config, const TriangleMesh& mesh) {
  Eigen::VectorXd v(mesh.numVertices());
  const double ts = config.resolvedTStart();
  const BarenblattPattle bp{config.m, config.r0};
  for (int i = 0; i < mesh.numVertices(); ++i) {
    if (mesh.isBoundaryVertex(i)) {
      v[i] = 0.0;
      continue;
    }
    const Vec2& x = mesh.vertex(i);
    switch (config.example) {
      case ProblemKind::Bp: v[i] = bp.value(x, ts); break;
      case ProblemKind::Waiting: v[i] = waitingTimeInitial(x); break;
      case ProblemKind::Complex: v[i] = complexDomainInitial(x); break;
    }
  }
  return v;
}

namespace {

std::string vtkName(int slab) {
  std::ostringstream name;
  name << "mesh_" << std::setw(6) << std::setfill('0') << slab << ".vtk";
  return name.str();
}

struct SnapshotTaker {
  const SimulationConfig& config;
  RunReport& report;
  std::vector<BoundaryTraceRow>& trace;
  const std::optional<BarenblattPattle>& exact;
  std::vector<double> start_radii;  // |x_i(t_start)| indexed by boundary vertex id

  void operator()(double t, int slab, const TriangleMesh& mesh,
                  const Eigen::VectorXd& v, const BoundaryState& bs) {
    Snapshot s;
    s.t = t;
    s.slab = slab;
    s.min_v = v.minCoeff();
    s.max_v = v.maxCoeff();
    s.area = mesh.totalArea();
    double disp = 0.0;
    for (std::size_t k = 0; k < bs.vertex_ids.size(); ++k) {
      const int id = bs.vertex_ids[k];
      disp = std::max(disp, std::abs(mesh.vertex(id).norm() -
                                     start_radii[id - mesh.numInterior()]));
      trace.push_back({t, id, mesh.vertex(id), bs.speeds[k]});
    }
    s.max_boundary_displacement = disp;
    if (exact) s.errors = computeErrorNorms(mesh, v, *exact, t);
    report.snapshots.push_back(s);

    if (config.write_vtk && !config.output_dir.empty()) {
      std::filesystem::create_directories(config.output_dir);
      saveMeshVtk(mesh, (std::filesystem::path(config.output_dir) / vtkName(slab)).string(),
                  &v, "v");
    }
  }
};

}  // namespace

RunReport runSimulation(const SimulationConfig& config) {
  config.validate();
  const auto wall0 = std::chrono::steady_clock::now();

  RunReport report;
  report.config = config;
  std::vector<BoundaryTraceRow> trace;

  TriangleMesh mesh;
  TriangleMesh tc_ref;  // reference computational mesh, fixed for the run
  Eigen::VectorXd v;

  const double ts = config.resolvedTStart();
  const double te = config.resolvedTEnd();
  std::optional<BarenblattPattle> exact;
  if (config.example == ProblemKind::Bp) exact = BarenblattPattle{config.m, config.r0};

  MmpdeParams params;
  params.theta = config.theta;
  params.p = config.p;
  params.tau = config.resolvedTau();

  SnapshotTaker snapshot{config, report, trace, exact, {}};

  XiIntegrateOptions xi_opts;
  PhysicalStepOptions ph_opts;

  double t = ts;
  int slab = 0;
  int last_snapshot_slab = -1;
  const double t_eps = 1e-14 * std::max(1.0, std::abs(te));

  try {
    mesh = makeInitialMesh(config);
    tc_ref = mesh;
    v = initialField(config, mesh);
    snapshot.start_radii.resize(mesh.numBoundary());
    for (int i = 0; i < mesh.numBoundary(); ++i) {
      snapshot.start_radii[i] = mesh.vertex(mesh.numInterior() + i).norm();
    }

    // Initial snapshot; dt = 0 leaves the boundary in place but yields the
    // current Darcy speeds for the trace.
    snapshot(t, slab, mesh, v, darcyStep(mesh, v, 0.0));
    last_snapshot_slab = 0;

    while (t < te - t_eps) {
      const double t_next = std::min(ts + (slab + 1) * config.dt_max, te);
      const double dt = t_next - t;

      // Boundary move by Darcy's law.
      BoundaryState bs = darcyStep(mesh, v, dt);
      TriangleMesh tilde = mesh;
      applyBoundaryState(tilde, bs);

      // Mesh move: relax the computational image of the reference mesh under
      // the frozen metric, then pull the physical vertices through the
      // piecewise-affine mesh map.
      const MmpdeMetric metric = buildMetric(tilde, v, config.metric_floor);
      TriangleMesh tc = tc_ref;
      const XiIntegrateResult xr = integrateXi(tc, tilde, metric, params, dt, xi_opts);
      report.xi_stats.accumulate(xr.stats);
      xi_opts.h_init = xr.suggested_h;

      TriangleMesh next = tilde;
      report.rebuild_fallback_total += rebuildPhysical(tc, tc_ref, tilde, next);

      // Pressure update on the moving mesh.
      MeshTrajectory traj;
      traj.topology = &mesh;
      traj.x_start = mesh.positionsVector();
      traj.x_end = next.positionsVector();
      traj.t_start = t;
      traj.t_end = t_next;
      PhysicalStepResult pr = stepPhysical(v, traj, config.m, ph_opts);
      report.phys_stats.accumulate(pr.stats);
      ph_opts.h_init = pr.suggested_h;

      mesh.setVertices(next.vertices());
      v = std::move(pr.v);
      t = t_next;
      ++slab;

      const bool last = !(t < te - t_eps);
      if (last || slab % config.snapshot_stride == 0) {
        snapshot(t, slab, mesh, v, bs);
        last_snapshot_slab = slab;
      }
    }
  } catch (const MeshTangledError& e) {
    report.termination = std::string("mesh_tangled: ") + e.what();
  } catch (const NonPositiveAreaError& e) {
    report.termination = std::string("mesh_tangled: ") + e.what();
  } catch (const BoundaryCollisionError& e) {
    report.termination = std::string("boundary_collision: ") + e.what();
  } catch (const NewtonDivergenceError& e) {
    report.termination = std::string("integrator_failure: ") + e.what();
  } catch (const IntegratorFailureError& e) {
    report.termination = std::string("integrator_failure: ") + e.what();
  } catch (const GenerationError& e) {
    report.termination = std::string("generation_failure: ") + e.what();
  }

  // Record the last good state even when a snapshot just happened, so aborted
  // runs always expose where they stopped.  A run that failed before the mesh
  // existed has nothing to record.
  if (mesh.numVertices() > 0 && last_snapshot_slab != slab) {
    try {
      snapshot(t, slab, mesh, v, darcyStep(mesh, v, 0.0));
    } catch (const Error&) {
      // The boundary of the last good state may already be pathological;
      // the report still carries the earlier snapshots.
    }
  }

  report.slab_count = slab;
  report.final_mesh = std::move(mesh);
  report.final_v = std::move(v);
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  writeRunOutputs(report, trace);
  return report;
}

int terminationExitCode(const std::string& termination) {
  if (termination == "completed") return 0;
  if (termination.rfind("mesh_tangled", 0) == 0) return 2;
  if (termination.rfind("boundary_collision", 0) == 0) return 3;
  if (termination.rfind("integrator_failure", 0) == 0) return 4;
  return 1;
}

namespace {

StudyRow makeRow(const RunReport& rep, int n, double dt_max, double h) {
  StudyRow row;
  row.n = n;
  row.dt_max = dt_max;
  row.h = h;
  row.termination = rep.termination;
  row.wall_time_sec = rep.wall_time_sec;
  if (rep.completed() && !rep.snapshots.empty() && rep.finalSnapshot().errors) {
    row.errors = rep.finalSnapshot().errors;
  }
  return row;
}

double regressSlope(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0;
  const int n = static_cast<int>(h.size());
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = std::log(h[i]);
    y[i] = std::log(std::max(err[i], 1e-300));
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

StudySlopes computeSlopes(const std::vector<StudyRow>& rows) {
  std::vector<double> h, e1v, e2v, e1u, e2u, eb;
  for (const StudyRow& r : rows) {
    if (!r.errors) continue;
    h.push_back(r.h);
    e1v.push_back(r.errors->l1_v);
    e2v.push_back(r.errors->l2_v);
    e1u.push_back(r.errors->l1_u);
    e2u.push_back(r.errors->l2_u);
    eb.push_back(r.errors->linf_boundary);
  }
  return StudySlopes{regressSlope(h, e1v), regressSlope(h, e2v), regressSlope(h, e1u),
                     regressSlope(h, e2u), regressSlope(h, eb)};
}

std::string studySubdir(const std::string& base, const std::string& tag) {
  if (base.empty()) return base;
  return (std::filesystem::path(base) / tag).string();
}

}  // namespace

StudyResult convergenceStudy(const SimulationConfig& base, const std::vector<int>& n_list) {
  StudyResult result;
  for (int n : n_list) {
    SimulationConfig c = base;
    c.target_elements = n;
    c.output_dir = studySubdir(base.output_dir, "n" + std::to_string(n));
    const RunReport rep = runSimulation(c);
    result.rows.push_back(makeRow(rep, n, c.dt_max, 1.0 / std::sqrt(double(n))));
  }
  result.slopes = computeSlopes(result.rows);
  return result;
}

StudyResult temporalStudy(const SimulationConfig& base, int n_fixed,
                          const std::vector<double>& dt_list) {
  StudyResult result;
  for (double dt : dt_list) {
    SimulationConfig c = base;
    c.target_elements = n_fixed;
    c.dt_max = dt;
    std::ostringstream tag;
    tag << "dt" << std::scientific << std::setprecision(2) << dt;
    c.output_dir = studySubdir(base.output_dir, tag.str());
    const RunReport rep = runSimulation(c);
    result.rows.push_back(makeRow(rep, n_fixed, dt, dt));
  }
  result.slopes = computeSlopes(result.rows);
  return result;
}

std::string studyToJson(const StudyResult& result) {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const StudyRow& r : result.rows) {
    nlohmann::json jr;
    jr["n"] = r.n;
    jr["dt_max"] = r.dt_max;
    jr["h"] = r.h;
    jr["termination"] = r.termination;
    jr["wall_time_sec"] = r.wall_time_sec;
    if (r.errors) {
      jr["errors"] = {{"l1_v", r.errors->l1_v},
                      {"l2_v", r.errors->l2_v},
                      {"l1_u", r.errors->l1_u},
                      {"l2_u", r.errors->l2_u},
                      {"linf_boundary", r.errors->linf_boundary}};
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  auto put = [](double s) {
    return std::isfinite(s) ? nlohmann::json(s) : nlohmann::json();
  };
  j["slopes"] = {{"l1_v", put(result.slopes.l1_v)},
                 {"l2_v", put(result.slopes.l2_v)},
                 {"l1_u", put(result.slopes.l1_u)},
                 {"l2_u", put(result.slopes.l2_u)},
                 {"boundary", put(result.slopes.boundary)}};
  return j.dump(2);
}

std::string studyToCsv(const StudyResult& result) {
  std::ostringstream out;
  out << "n,dt_max,h,L1_v,L2_v,L1_u,L2_u,Linf_b,termination\n";
  out << std::setprecision(17);
  for (const StudyRow& r : result.rows) {
    out << r.n << ',' << r.dt_max << ',' << r.h << ',';
    if (r.errors) {
      out << r.errors->l1_v << ',' << r.errors->l2_v << ',' << r.errors->l1_u << ','
          << r.errors->l2_u << ',' << r.errors->linf_boundary;
    } else {
      out << ",,,,";
    }
    out << ',' << r.termination << '\n';
  }
  return out.str();
}

std::string studyTable(const StudyResult& result) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "N" << std::setw(12) << "dt_max" << std::setw(12)
      << "h" << std::setw(12) << "L1(v)" << std::setw(12) << "L2(v)" << std::setw(12)
      << "L1(u)" << std::setw(12) << "L2(u)" << std::setw(12) << "Linf(bdry)"
      << "status\n";
  for (const StudyRow& r : result.rows) {
    out << std::left << std::setw(8) << r.n << std::setw(12) << std::setprecision(3)
        << r.dt_max << std::setw(12) << r.h;
    if (r.errors) {
      out << std::setw(12) << std::setprecision(4) << r.errors->l1_v << std::setw(12)
          << r.errors->l2_v << std::setw(12) << r.errors->l1_u << std::setw(12)
          << r.errors->l2_u << std::setw(12) << r.errors->linf_boundary;
    } else {
      out << std::setw(60) << "-";
    }
    out << r.termination << '\n';
  }
  auto show = [&](const char* name, double s) {
    out << "slope " << std::left << std::setw(12) << name;
    if (std::isfinite(s)) {
      out << std::setprecision(3) << s;
    } else {
      out << "-";
    }
    out << '\n';
  };
  show("L1(v)", result.slopes.l1_v);
  show("L2(v)", result.slopes.l2_v);
  show("L1(u)", result.slopes.l1_u);
  show("L2(u)", result.slopes.l2_u);
  show("Linf(bdry)", result.slopes.boundary);
  return out.str();
}

}  // namespace pme
