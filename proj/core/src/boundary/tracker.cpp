#include "pme/boundary/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace pme {

namespace {

struct Segment {
  Vec2 a, b;
  int va, vb;  // vertex ids, used to skip adjacent pairs
  double xmin, xmax;
};

int orientSign(const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
  const double d = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  if (d > eps) return 1;
  if (d < -eps) return -1;
  return 0;
}

bool onSegment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segmentsIntersect(const Segment& s, const Segment& t, double eps) {
  const int o1 = orientSign(s.a, s.b, t.a, eps);
  const int o2 = orientSign(s.a, s.b, t.b, eps);
  const int o3 = orientSign(t.a, t.b, s.a, eps);
  const int o4 = orientSign(t.a, t.b, s.b, eps);
  if (o1 != o2 && o3 != o4) return true;  // proper crossing
  if (o1 == 0 && onSegment(s.a, s.b, t.a)) return true;
  if (o2 == 0 && onSegment(s.a, s.b, t.b)) return true;
  if (o3 == 0 && onSegment(t.a, t.b, s.a)) return true;
  if (o4 == 0 && onSegment(t.a, t.b, s.b)) return true;
  return false;
}

}  // namespace

Vec2 recoverGradient(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                     int vertex) {
  if (v_full.size() != mesh.numVertices()) {
    throw Error("recoverGradient: field size mismatch");
  }
  Vec2 acc(0.0, 0.0);
  double wsum = 0.0;
  for (const PatchEntry& pe : mesh.patch(vertex)) {
    const ElementFrame f = mesh.elementFrame(pe.element);
    const Eigen::Matrix<double, 3, 2> g = f.gradLambda();
    const auto& t = mesh.tri(pe.element);
    Vec2 grad(0.0, 0.0);
    for (int i = 0; i < 3; ++i) grad += v_full[t[i]] * g.row(i).transpose();
    acc += f.area * grad;
    wsum += f.area;
  }
  return acc / wsum;
}

BoundaryState darcyStep(const TriangleMesh& mesh, const Eigen::VectorXd& v_full,
                        double dt) {
  BoundaryState st;
  const int nb = mesh.numBoundary();
  st.vertex_ids.reserve(nb);
  st.positions.reserve(nb);
  st.normals.reserve(nb);
  st.speeds.reserve(nb);
  std::vector<Vec2> moved(mesh.numVertices());
  for (int v = 0; v < mesh.numVertices(); ++v) moved[v] = mesh.vertex(v);
  for (int v = mesh.numInterior(); v < mesh.numVertices(); ++v) {
    const Vec2 n = mesh.boundaryNormal(v);
    const Vec2 g = recoverGradient(mesh, v_full, v);
    const double speed = -g.dot(n);
    const Vec2 pos = mesh.vertex(v) + dt * speed * n;
    st.vertex_ids.push_back(v);
    st.positions.push_back(pos);
    st.normals.push_back(n);
    st.speeds.push_back(speed);
    moved[v] = pos;
  }
  if (boundarySelfIntersects(mesh, moved)) {
    throw BoundaryCollisionError("moved boundary self-intersects");
  }
  return st;
}

void applyBoundaryState(TriangleMesh& mesh, const BoundaryState& state) {
  for (std::size_t i = 0; i < state.vertex_ids.size(); ++i) {
    mesh.setVertex(state.vertex_ids[i], state.positions[i]);
  }
}

bool boundarySelfIntersects(const TriangleMesh& mesh, const std::vector<Vec2>& moved) {
  std::vector<Segment> segs;
  double scale = 0.0;
  for (const auto& loop : mesh.boundaryLoops()) {
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      Segment s;
      s.va = loop[i];
      s.vb = loop[(i + 1) % n];
      s.a = moved[s.va];
      s.b = moved[s.vb];
      s.xmin = std::min(s.a.x(), s.b.x());
      s.xmax = std::max(s.a.x(), s.b.x());
      scale = std::max({scale, std::abs(s.a.x()), std::abs(s.a.y())});
      segs.push_back(s);
    }
  }
  const double eps = 1e-13 * std::max(scale, 1.0);
  std::sort(segs.begin(), segs.end(),
            [](const Segment& a, const Segment& b) { return a.xmin < b.xmin; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (segs[j].xmin > segs[i].xmax) break;
      const bool adjacent = segs[i].va == segs[j].va || segs[i].va == segs[j].vb ||
                            segs[i].vb == segs[j].va || segs[i].vb == segs[j].vb;
      if (adjacent) continue;
      if (segmentsIntersect(segs[i], segs[j], eps)) return true;
    }
  }
  return false;
}

}  // namespace pme
