#include "pme/sim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pme/exact/solutions.hpp"

namespace pme {

namespace {
using nlohmann::json;
}

const char* problemKindName(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Bp: return "bp";
    case ProblemKind::Waiting: return "waiting";
    case ProblemKind::Complex: return "complex";
  }
  return "?";
}

ProblemKind problemKindFromName(const std::string& name) {
  if (name == "bp") return ProblemKind::Bp;
  if (name == "waiting") return ProblemKind::Waiting;
  if (name == "complex") return ProblemKind::Complex;
  throw ConfigError("unknown example \"" + name + "\" (expected bp, waiting, or complex)");
}

double SimulationConfig::resolvedTau() const {
  if (tau > 0.0) return tau;
  return std::min(1e-3, 1e-1 / target_elements);
}

double SimulationConfig::resolvedTStart() const {
  if (t_start != kUnsetTime) return t_start;
  if (example == ProblemKind::Bp) return BarenblattPattle{m, r0}.t0();
  return 0.0;
}

double SimulationConfig::resolvedTEnd() const {
  if (t_end != kUnsetTime) return t_end;
  switch (example) {
    case ProblemKind::Bp: return (BarenblattPattle{m, r0}.t0() + 0.1) / 2.0;
    case ProblemKind::Waiting: return 0.9;
    case ProblemKind::Complex: return 0.75;
  }
  return 0.0;
}

double SimulationConfig::supportRadiusAtStart() const {
  switch (example) {
    case ProblemKind::Bp:
      return BarenblattPattle{m, r0}.supportRadius(resolvedTStart());
    case ProblemKind::Waiting:
      return kWaitingTimeRadius;
    case ProblemKind::Complex:
      return 0.0;  // not a disk; callers must not use this
  }
  return 0.0;
}

void SimulationConfig::validate() const {
  if (m < 1.0) throw ConfigError("m must be >= 1");
  if (target_elements < 16) throw ConfigError("target_elements must be >= 16");
  if (dt_max <= 0.0) throw ConfigError("dt_max must be positive");
  if (tau < 0.0) throw ConfigError("tau must be positive (or 0 for the default rule)");
  if (theta <= 0.0 || theta > 0.5) throw ConfigError("theta must lie in (0, 1/2]");
  if (p < 1.0) throw ConfigError("p must be >= 1");
  if (metric_floor <= 0.0) throw ConfigError("metric_floor must be positive");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");

  const double ts = resolvedTStart();
  const double te = resolvedTEnd();
  if (!(te >= ts)) throw ConfigError("t_end must not precede t_start");

  switch (example) {
    case ProblemKind::Bp: {
      if (r0 <= 0.0) throw ConfigError("r0 must be positive");
      const double t0 = BarenblattPattle{m, r0}.t0();
      if (ts < t0 * (1.0 - 1e-12)) {
        throw ConfigError("t_start must be >= the self-similar start time t0");
      }
      break;
    }
    case ProblemKind::Waiting:
      if (m != kWaitingTimeM) throw ConfigError("the waiting-time example requires m = 2");
      if (ts != 0.0) throw ConfigError("the waiting-time example starts at t = 0");
      break;
    case ProblemKind::Complex:
      if (m != kComplexDomainM) throw ConfigError("the complex-support example requires m = 2");
      if (ts != 0.0) throw ConfigError("the complex-support example starts at t = 0");
      break;
  }
}

SimulationConfig parseConfigJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  static const std::set<std::string> known = {
      "example",      "m",          "r0",          "target_elements",
      "dt_max",       "tau",        "theta",       "p",
      "metric_floor", "t_start",    "t_end",       "output_dir",
      "snapshot_stride", "write_vtk", "seed"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown config key \"" + item.key() + "\"");
    }
  }

  SimulationConfig c;
  try {
    if (j.contains("example")) c.example = problemKindFromName(j["example"].get<std::string>());
    if (j.contains("m")) c.m = j["m"].get<double>();
    if (j.contains("r0")) c.r0 = j["r0"].get<double>();
    if (j.contains("target_elements")) c.target_elements = j["target_elements"].get<int>();
    if (j.contains("dt_max")) c.dt_max = j["dt_max"].get<double>();
    if (j.contains("tau")) c.tau = j["tau"].get<double>();
    if (j.contains("theta")) c.theta = j["theta"].get<double>();
    if (j.contains("p")) c.p = j["p"].get<double>();
    if (j.contains("metric_floor")) c.metric_floor = j["metric_floor"].get<double>();
    if (j.contains("t_start")) c.t_start = j["t_start"].get<double>();
    if (j.contains("t_end")) c.t_end = j["t_end"].get<double>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("snapshot_stride")) c.snapshot_stride = j["snapshot_stride"].get<int>();
    if (j.contains("write_vtk")) c.write_vtk = j["write_vtk"].get<bool>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

SimulationConfig loadConfigJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfigJson(buf.str());
}

std::string configToJson(const SimulationConfig& c) {
  json j;
  j["example"] = problemKindName(c.example);
  j["m"] = c.m;
  j["r0"] = c.r0;
  j["target_elements"] = c.target_elements;
  j["dt_max"] = c.dt_max;
  j["tau"] = c.resolvedTau();
  j["theta"] = c.theta;
  j["p"] = c.p;
  j["metric_floor"] = c.metric_floor;
  j["t_start"] = c.resolvedTStart();
  j["t_end"] = c.resolvedTEnd();
  j["output_dir"] = c.output_dir;
  j["snapshot_stride"] = c.snapshot_stride;
  j["write_vtk"] = c.write_vtk;
  j["seed"] = c.seed;
  return j.dump(2);
}

}  // namespace pme
