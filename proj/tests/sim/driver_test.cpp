#include <cmath>

#include <gtest/gtest.h>

#include "pme/sim/driver.hpp"

namespace pme {
namespace {

SimulationConfig tinyBenchmark(int n, int slabs) {
  SimulationConfig c;
  c.example = ProblemKind::Bp;
  c.target_elements = n;
  c.t_start = BarenblattPattle{c.m, c.r0}.t0();
  c.t_end = c.t_start + slabs * c.dt_max;
  return c;
}

TEST(RunSimulation, ZeroLengthWindowYieldsOneSnapshot) {
  SimulationConfig c = tinyBenchmark(100, 0);
  const RunReport rep = runSimulation(c);
  EXPECT_TRUE(rep.completed());
  EXPECT_EQ(rep.slab_count, 0);
  ASSERT_EQ(rep.snapshots.size(), 1u);
  const Snapshot& s = rep.snapshots.front();
  EXPECT_EQ(s.t, c.t_start);
  EXPECT_EQ(s.slab, 0);
  EXPECT_EQ(s.max_boundary_displacement, 0.0);
  ASSERT_TRUE(s.errors.has_value());
  EXPECT_GT(rep.final_mesh.numVertices(), 0);
  EXPECT_NEAR(s.max_v, 0.5, 0.05);  // initial peak pressure
}

TEST(RunSimulation, ShortBenchmarkRunBehaves) {
  SimulationConfig c = tinyBenchmark(100, 10);
  c.snapshot_stride = 1;
  const RunReport rep = runSimulation(c);
  ASSERT_TRUE(rep.completed()) << rep.termination;
  EXPECT_EQ(rep.slab_count, 10);
  ASSERT_EQ(rep.snapshots.size(), 11u);

  EXPECT_EQ(rep.snapshots.front().t, c.t_start);
  EXPECT_EQ(rep.snapshots.back().t, c.t_end);
  for (std::size_t i = 1; i < rep.snapshots.size(); ++i) {
    const Snapshot& prev = rep.snapshots[i - 1];
    const Snapshot& cur = rep.snapshots[i];
    // Slabs respect the cap and advance monotonically.
    EXPECT_GT(cur.t, prev.t);
    EXPECT_LE(cur.t - prev.t, c.dt_max * (1.0 + 1e-12));
    // The support expands, so the mesh area grows and the boundary walks
    // outward.
    EXPECT_GT(cur.area, prev.area);
    EXPECT_GE(cur.max_boundary_displacement, prev.max_boundary_displacement);
    // No meaningful negative pressure anywhere.
    EXPECT_GE(cur.min_v, -1e-6 * cur.max_v);
  }

  // Total boundary displacement matches the exact support growth to within
  // the forward-Euler boundary error.
  const BarenblattPattle bp;
  const double exact_growth =
      bp.supportRadius(c.t_end) - bp.supportRadius(c.t_start);
  const double got = rep.snapshots.back().max_boundary_displacement;
  EXPECT_GT(got, 0.8 * exact_growth);
  EXPECT_LT(got, 1.2 * exact_growth);

  ASSERT_TRUE(rep.finalSnapshot().errors.has_value());
  EXPECT_LT(rep.finalSnapshot().errors->l2_v, 5e-2);
  EXPECT_GT(rep.phys_stats.accepted, 0);
  EXPECT_GT(rep.xi_stats.accepted, 0);
}

TEST(RunSimulation, IdenticalConfigsProduceIdenticalReports) {
  SimulationConfig c = tinyBenchmark(100, 3);
  const RunReport a = runSimulation(c);
  const RunReport b = runSimulation(c);
  EXPECT_EQ(reportToJson(a, /*include_timing=*/false),
            reportToJson(b, /*include_timing=*/false));
}

TEST(RunSimulation, WaitingProfileKeepsItsBoundaryStill) {
  SimulationConfig c;
  c.example = ProblemKind::Waiting;
  c.target_elements = 100;
  c.t_start = 0.0;
  c.t_end = 5 * c.dt_max;
  const RunReport rep = runSimulation(c);
  ASSERT_TRUE(rep.completed()) << rep.termination;
  // Zero-slope initial data: the boundary creeps at most a soft numerical
  // drift while the interior rearranges.
  EXPECT_LT(rep.finalSnapshot().max_boundary_displacement, 1e-3);
  // No exact solution is attached to this problem.
  EXPECT_FALSE(rep.finalSnapshot().errors.has_value());
  EXPECT_GT(rep.finalSnapshot().max_v, 0.3);
}

TEST(RunSimulation, CShapedSupportRunsAndKeepsItsTopology) {
  SimulationConfig c;
  c.example = ProblemKind::Complex;
  c.target_elements = 250;
  c.t_start = 0.0;
  c.t_end = 5 * c.dt_max;
  const RunReport rep = runSimulation(c);
  ASSERT_TRUE(rep.completed()) << rep.termination;
  EXPECT_EQ(rep.final_mesh.boundaryLoops().size(), 1u);
  EXPECT_NEAR(rep.finalSnapshot().area, 0.625 * M_PI, 0.02 * 0.625 * M_PI);
  EXPECT_GE(rep.finalSnapshot().min_v, -1e-6 * rep.finalSnapshot().max_v);
}

TEST(RunSimulation, InvalidConfigThrowsButGenerationFailureIsReported) {
  SimulationConfig bad;
  bad.m = 0.5;
  EXPECT_THROW(runSimulation(bad), ConfigError);

  // No disk triangulation lands within twenty percent of 17 elements; the
  // run must fail softly with a recorded termination rather than throw.
  SimulationConfig c = tinyBenchmark(17, 1);
  const RunReport rep = runSimulation(c);
  EXPECT_FALSE(rep.completed());
  EXPECT_EQ(rep.termination.rfind("generation_failure", 0), 0u) << rep.termination;
  EXPECT_EQ(terminationExitCode(rep.termination), 1);
  EXPECT_TRUE(rep.snapshots.empty());
  EXPECT_EQ(rep.final_mesh.numVertices(), 0);
}

TEST(ConvergenceStudy, TwoPointStudyProducesSlopes) {
  SimulationConfig base = tinyBenchmark(100, 5);
  StudyResult res = convergenceStudy(base, {100, 400});
  ASSERT_EQ(res.rows.size(), 2u);
  for (const StudyRow& row : res.rows) {
    EXPECT_EQ(row.termination, "completed");
    ASSERT_TRUE(row.errors.has_value());
    EXPECT_GT(row.errors->l2_v, 0.0);
  }
  EXPECT_NEAR(res.rows[0].h, 0.1, 1e-12);
  EXPECT_NEAR(res.rows[1].h, 0.05, 1e-12);
  // Refinement helps, so the slope is positive and finite.
  EXPECT_TRUE(std::isfinite(res.slopes.l2_v));
  EXPECT_GT(res.slopes.l2_v, 0.5);
  // Render paths do not throw and carry both rows.
  EXPECT_NE(studyToCsv(res).find(",completed"), std::string::npos);
  EXPECT_NE(studyTable(res).find("slope L2(v)"), std::string::npos);
  EXPECT_NE(studyToJson(res).find("\"rows\""), std::string::npos);
}

TEST(ConvergenceStudy, SingleRowHasUndefinedSlopes) {
  SimulationConfig base = tinyBenchmark(100, 2);
  const StudyResult res = convergenceStudy(base, {100});
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_TRUE(std::isnan(res.slopes.l2_v));
  EXPECT_TRUE(std::isnan(res.slopes.boundary));
}

TEST(TemporalStudy, VariesTheSlabCapAtFixedMesh) {
  SimulationConfig base = tinyBenchmark(100, 0);
  base.t_end = base.t_start + 1e-3;
  const StudyResult res = temporalStudy(base, 100, {2e-4, 1e-4});
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_EQ(res.rows[0].dt_max, 2e-4);
  EXPECT_EQ(res.rows[1].dt_max, 1e-4);
  EXPECT_EQ(res.rows[0].h, 2e-4);  // temporal studies regress against dt
  EXPECT_EQ(res.rows[0].n, 100);
  for (const StudyRow& row : res.rows) {
    EXPECT_EQ(row.termination, "completed");
    EXPECT_TRUE(row.errors.has_value());
  }
}

}  // namespace
}  // namespace pme
