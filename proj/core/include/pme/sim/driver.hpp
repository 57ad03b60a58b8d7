#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pme/sim/config.hpp"
#include "pme/sim/report.hpp"

namespace pme {

// Initial triangulation matching the problem's support region.
TriangleMesh makeInitialMesh(const SimulationConfig& config);

// Initial pressure sampled at the vertices; boundary entries are exactly 0.
Eigen::VectorXd initialField(const SimulationConfig& config, const TriangleMesh& mesh);

// Execute one run: repeat (boundary move by Darcy's law) -> (mesh move by
// the metric gradient flow) -> (pressure update on the moving mesh) in slabs
// of length <= dt_max until t_end.  Solver failures do not propagate; they
// end the run early and are recorded in RunReport::termination, with the
// snapshots and final state reflecting the last good slab.  ConfigError from
// an invalid config does propagate.
RunReport runSimulation(const SimulationConfig& config);

// Process exit code for a termination string: 0 completed, 2 mesh tangled,
// 3 boundary collision, 4 integrator failure, 1 anything else.
int terminationExitCode(const std::string& termination);

// One run of a refinement study.
struct StudyRow {
  int n = 0;            // element-count target
  double dt_max = 0.0;
  double h = 0.0;       // regression abscissa: 1/sqrt(N), or dt for temporal studies
  std::string termination;
  double wall_time_sec = 0.0;
  std::optional<ErrorNorms> errors;  // final-time norms of completed benchmark runs
};

// Least-squares slopes of log(error) against log(h) over rows with errors;
// NaN with fewer than two usable rows.
struct StudySlopes {
  double l1_v, l2_v, l1_u, l2_u, boundary;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  StudySlopes slopes;
};

// Run the benchmark problem once per element-count target and tabulate
// final-time error norms against h = 1/sqrt(N).
StudyResult convergenceStudy(const SimulationConfig& base, const std::vector<int>& n_list);

// Same, but fixing the mesh at n_fixed elements and varying the slab cap.
StudyResult temporalStudy(const SimulationConfig& base, int n_fixed,
                          const std::vector<double>& dt_list);

std::string studyToJson(const StudyResult& result);
std::string studyToCsv(const StudyResult& result);
std::string studyTable(const StudyResult& result);  // aligned text for terminals

}  // namespace pme
