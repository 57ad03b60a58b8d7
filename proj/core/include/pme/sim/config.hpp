#pragma once

#include <string>

#include "pme/errors.hpp"

namespace pme {

// Which initial/boundary-value problem a run solves.
enum class ProblemKind {
  Bp,       // self-similar benchmark on a disk (exact errors available)
  Waiting,  // zero-slope initial pressure on a disk of radius pi/2
  Complex,  // C-shaped support (three-quarter annulus with half-disk caps)
};

const char* problemKindName(ProblemKind kind);
ProblemKind problemKindFromName(const std::string& name);  // throws ConfigError

// Full description of one simulation run.  Times and the MMPDE relaxation
// constant may be left unset (NaN / 0) to pick the per-problem defaults:
//   bp:       t_start = t0(m, r0),  t_end = (t0 + 0.1) / 2
//   waiting:  t_start = 0,          t_end = 0.9
//   complex:  t_start = 0,          t_end = 0.75
//   tau = min(1e-3, 0.1 / target_elements)
struct SimulationConfig {
  ProblemKind example = ProblemKind::Bp;
  double m = 2.0;
  double r0 = 0.5;  // initial support radius of the benchmark solution
  int target_elements = 2000;

  double dt_max = 1e-4;     // outer slab cap
  double tau = 0.0;         // 0 -> min(1e-3, 0.1/N)
  double theta = 1.0 / 3.0; // energy balance weight
  double p = 2.0;           // energy norm power
  double metric_floor = 1e-5;

  double t_start = kUnsetTime;
  double t_end = kUnsetTime;

  std::string output_dir;    // empty -> no files are written
  int snapshot_stride = 50;  // slabs between snapshots (first/last always kept)
  bool write_vtk = false;
  unsigned seed = 0;  // recorded for reproducibility; the solver is seed-free

  static constexpr double kUnsetTime = -1e300;

  double resolvedTau() const;
  double resolvedTStart() const;
  double resolvedTEnd() const;
  double supportRadiusAtStart() const;  // initial boundary radius (disk cases)

  // Throws ConfigError on out-of-range or inconsistent settings.
  void validate() const;
};

// Parse a JSON config file with snake_case keys matching the field names
// above ("example" takes one of "bp", "waiting", "complex").  Unknown keys
// are an error so typos cannot silently fall back to defaults.
SimulationConfig loadConfigJson(const std::string& path);
SimulationConfig parseConfigJson(const std::string& text);  // exposed for tests

// Serialize (fully resolved fields are kept as stored, not resolved).
std::string configToJson(const SimulationConfig& config);

}  // namespace pme
