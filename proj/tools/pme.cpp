// Command-line front end: single runs, refinement studies, and exact-solution
// tables for the moving-mesh porous-medium solver.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pme/exact/solutions.hpp"
#include "pme/sim/driver.hpp"

namespace {

int runCommand(const std::string& config_path) {
  const pme::SimulationConfig config = pme::loadConfigJson(config_path);
  const pme::RunReport report = pme::runSimulation(config);

  std::cout << "run: " << pme::problemKindName(config.example) << " m=" << config.m
            << " N=" << report.final_mesh.numElements() << " (target "
            << config.target_elements << ")\n";
  std::cout << "slabs: " << report.slab_count << ", wall time: " << report.wall_time_sec
            << " s\n";
  const pme::Snapshot& last = report.finalSnapshot();
  std::cout << "final t = " << last.t << ", area = " << last.area
            << ", v range = [" << last.min_v << ", " << last.max_v << "]\n";
  if (last.errors) {
    std::cout << "errors at t_end: L2(v) = " << last.errors->l2_v
              << ", L1(v) = " << last.errors->l1_v
              << ", Linf(boundary) = " << last.errors->linf_boundary << "\n";
  }
  std::cout << "termination: " << report.termination << "\n";
  if (!config.output_dir.empty()) {
    std::cout << "outputs in " << config.output_dir << "\n";
  }
  return pme::terminationExitCode(report.termination);
}

int studyExitCode(const pme::StudyResult& result) {
  for (const pme::StudyRow& row : result.rows) {
    if (row.termination != "completed") return pme::terminationExitCode(row.termination);
  }
  return 0;
}

void writeStudyFiles(const pme::StudyResult& result, const std::string& dir,
                     const std::string& stem) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream((std::filesystem::path(dir) / (stem + ".json")))
      << pme::studyToJson(result) << "\n";
  std::ofstream((std::filesystem::path(dir) / (stem + ".csv")))
      << pme::studyToCsv(result);
}

int convergeCommand(const std::string& config_path, const std::vector<int>& n_list,
                    const std::vector<double>& dt_list) {
  const pme::SimulationConfig base = pme::loadConfigJson(config_path);

  std::cout << "refinement study over N = {";
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    std::cout << (i ? ", " : "") << n_list[i];
  }
  std::cout << "}\n";
  const pme::StudyResult spatial = pme::convergenceStudy(base, n_list);
  std::cout << pme::studyTable(spatial);
  writeStudyFiles(spatial, base.output_dir, "study");
  int code = studyExitCode(spatial);

  if (!dt_list.empty()) {
    const int n_fixed = *std::max_element(n_list.begin(), n_list.end());
    std::cout << "\nslab-cap study at N = " << n_fixed << "\n";
    const pme::StudyResult temporal = pme::temporalStudy(base, n_fixed, dt_list);
    std::cout << pme::studyTable(temporal);
    writeStudyFiles(temporal, base.output_dir, "study_dt");
    if (code == 0) code = studyExitCode(temporal);
  }
  return code;
}

int bpTableCommand(double m, double r0, double t) {
  const pme::BarenblattPattle bp{m, r0};
  if (t <= 0.0) t = bp.t0();
  if (t < bp.t0()) {
    std::cerr << "error: t must be >= t0 = " << bp.t0() << "\n";
    return 1;
  }
  std::cout << "self-similar solution, m = " << m << ", r0 = " << r0 << "\n";
  std::cout << "t0 = " << bp.t0() << ", t = " << t << "\n";
  std::cout << "lambda(t) = " << bp.lambda(t) << "\n";
  std::cout << "support radius R(t) = " << bp.supportRadius(t) << "\n";
  std::cout << "boundary speed R'(t) = " << bp.supportRadiusRate(t) << "\n";
  std::cout << "\n  r/R         r             v(r,t)\n";
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double r = frac * bp.supportRadius(t);
    std::printf("  %-10.4g  %-12.8g  %-14.10g\n", frac, r,
                bp.value(pme::Vec2(r, 0.0), t));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-mesh finite-element solver for the porous medium equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<int> n_list;
  std::vector<double> dt_list;
  double bp_m = 2.0, bp_r0 = 0.5, bp_t = 0.0;

  CLI::App* run = app.add_subcommand("run", "Execute one simulation from a JSON config");
  run->add_option("--config", config_path, "JSON config file")->required();

  CLI::App* conv = app.add_subcommand(
      "converge", "Run a mesh-refinement study (and optionally a slab-cap study)");
  conv->add_option("--config", config_path, "JSON config file (benchmark problem)")
      ->required();
  conv->add_option("--n", n_list, "element-count targets, e.g. 500,2000,8000")
      ->required()
      ->delimiter(',');
  conv->add_option("--dtmax", dt_list, "slab caps for the temporal study")
      ->delimiter(',');

  CLI::App* table = app.add_subcommand("bp-table", "Print exact benchmark values");
  table->add_option("--m", bp_m, "porous-medium exponent");
  table->add_option("--r0", bp_r0, "initial support radius");
  table->add_option("--t", bp_t, "evaluation time (default t0)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return runCommand(config_path);
    if (conv->parsed()) return convergeCommand(config_path, n_list, dt_list);
    return bpTableCommand(bp_m, bp_r0, bp_t);
  } catch (const pme::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
