#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/exact/norms.hpp"
#include "pme/geometry/mesh.hpp"
#include "pme/ode/radau.hpp"
#include "pme/sim/config.hpp"

namespace pme {

// One sampled instant of a run.
struct Snapshot {
  double t = 0.0;
  int slab = 0;  // number of completed slabs at this instant
  double min_v = 0.0;
  double max_v = 0.0;
  double area = 0.0;
  // max over boundary vertices of | |x_i(t)| - |x_i(t_start)| |
  double max_boundary_displacement = 0.0;
  std::optional<ErrorNorms> errors;  // exact-solution runs only
};

// Everything a finished (or aborted) run reports.  The last good state is
// always present, so failures can be inspected.
struct RunReport {
  SimulationConfig config;
  std::string termination = "completed";  // or "<error kind>: <message>"
  int slab_count = 0;
  double wall_time_sec = 0.0;
  int rebuild_fallback_total = 0;
  RadauStats xi_stats;
  RadauStats phys_stats;
  std::vector<Snapshot> snapshots;

  TriangleMesh final_mesh;
  Eigen::VectorXd final_v;

  bool completed() const { return termination == "completed"; }
  const Snapshot& finalSnapshot() const { return snapshots.back(); }
};

// JSON rendering of the report (mesh and field excluded; those go to their
// own files).  include_timing=false drops wall-clock fields so that two
// reports from identical runs compare bit-for-bit.
std::string reportToJson(const RunReport& report, bool include_timing = true);

// Write report.json, errors.csv ("t,L1_v,L2_v,L1_u,L2_u,Linf_b"; exact-
// solution runs only), boundary.csv ("t,vertex_id,x,y,speed"), and the final
// mesh/field into report.config.output_dir.  No-op when output_dir is empty.
struct BoundaryTraceRow {
  double t;
  int vertex_id;
  Vec2 position;
  double speed;
};

void writeRunOutputs(const RunReport& report,
                     const std::vector<BoundaryTraceRow>& boundary_trace);

}  // namespace pme
