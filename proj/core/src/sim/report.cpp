#include "pme/sim/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "pme/geometry/mesh_io.hpp"

namespace pme {

namespace {

using nlohmann::json;

json statsToJson(const RadauStats& s) {
  json j;
  j["steps"] = s.steps;
  j["accepted"] = s.accepted;
  j["rejected_error"] = s.rejected_error;
  j["rejected_newton"] = s.rejected_newton;
  j["rejected_veto"] = s.rejected_veto;
  j["rhs_evals"] = s.rhs_evals;
  j["jacobians"] = s.jacobians;
  j["factorizations"] = s.factorizations;
  j["newton_iters"] = s.newton_iters;
  return j;
}

}  // namespace

std::string reportToJson(const RunReport& report, bool include_timing) {
  json j;
  j["config"] = json::parse(configToJson(report.config));
  j["termination"] = report.termination;
  j["slab_count"] = report.slab_count;
  if (include_timing) j["wall_time_sec"] = report.wall_time_sec;
  j["rebuild_fallback_total"] = report.rebuild_fallback_total;
  j["xi_stats"] = statsToJson(report.xi_stats);
  j["phys_stats"] = statsToJson(report.phys_stats);

  json snaps = json::array();
  for (const Snapshot& s : report.snapshots) {
    json js;
    js["t"] = s.t;
    js["slab"] = s.slab;
    js["min_v"] = s.min_v;
    js["max_v"] = s.max_v;
    js["area"] = s.area;
    js["max_boundary_displacement"] = s.max_boundary_displacement;
    if (s.errors) {
      json je;
      je["l1_v"] = s.errors->l1_v;
      je["l2_v"] = s.errors->l2_v;
      je["l1_u"] = s.errors->l1_u;
      je["l2_u"] = s.errors->l2_u;
      je["linf_boundary"] = s.errors->linf_boundary;
      js["errors"] = je;
    }
    snaps.push_back(std::move(js));
  }
  j["snapshots"] = std::move(snaps);
  return j.dump(2);
}

void writeRunOutputs(const RunReport& report,
                     const std::vector<BoundaryTraceRow>& boundary_trace) {
  const std::string& dir = report.config.output_dir;
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);

  {
    std::ofstream out(base / "report.json");
    out << reportToJson(report) << "\n";
  }
  {
    std::ofstream out(base / "errors.csv");
    out << "t,L1_v,L2_v,L1_u,L2_u,Linf_b\n";
    out << std::setprecision(17);
    for (const Snapshot& s : report.snapshots) {
      if (!s.errors) continue;
      out << s.t << ',' << s.errors->l1_v << ',' << s.errors->l2_v << ','
          << s.errors->l1_u << ',' << s.errors->l2_u << ','
          << s.errors->linf_boundary << '\n';
    }
  }
  {
    std::ofstream out(base / "boundary.csv");
    out << "t,vertex_id,x,y,speed\n";
    out << std::setprecision(17);
    for (const BoundaryTraceRow& row : boundary_trace) {
      out << row.t << ',' << row.vertex_id << ',' << row.position.x() << ','
          << row.position.y() << ',' << row.speed << '\n';
    }
  }
  if (report.final_mesh.numVertices() > 0) {
    saveMeshText(report.final_mesh, (base / "final_mesh.txt").string());
    saveMeshVtk(report.final_mesh, (base / "final_mesh.vtk").string(),
                &report.final_v, "v");
  }
}

}  // namespace pme
