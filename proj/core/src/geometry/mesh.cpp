#include "pme/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace pme {

namespace {

double signedDoubleArea(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec2> vertices,
                           std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), tris_(std::move(triangles)) {
  const int nv = numVertices();
  const int ne = numElements();
  if (nv < 3 || ne < 1) {
    throw MeshFormatError("mesh needs at least 3 vertices and 1 triangle");
  }
  for (int k = 0; k < ne; ++k) {
    auto& t = tris_[k];
    for (int i = 0; i < 3; ++i) {
      if (t[i] < 0 || t[i] >= nv) {
        throw MeshFormatError("triangle " + std::to_string(k) +
                              " references vertex " + std::to_string(t[i]));
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshFormatError("triangle " + std::to_string(k) +
                            " has repeated vertices");
    }
    // Canonical counterclockwise orientation.
    if (signedDoubleArea(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]) < 0.0) {
      std::swap(t[1], t[2]);
    }
  }

  // Undirected edge -> incident triangles, keeping the directed occurrence so
  // boundary edges inherit the triangle's counterclockwise direction.
  struct EdgeUse {
    int tri;
    int opposite;  // local index of the vertex opposite this edge
    bool forward;  // true if the triangle traverses the edge (lo -> hi)
  };
  std::map<std::pair<int, int>, std::vector<EdgeUse>> edges;
  for (int k = 0; k < ne; ++k) {
    const auto& t = tris_[k];
    for (int i = 0; i < 3; ++i) {
      const int a = t[(i + 1) % 3];
      const int b = t[(i + 2) % 3];
      const auto key = std::minmax(a, b);
      edges[{key.first, key.second}].push_back({k, i, a < b});
    }
  }

  neighbors_.assign(ne, {-1, -1, -1});
  std::map<int, int> next_directed;  // boundary edge a -> b, domain on the left
  for (const auto& [key, uses] : edges) {
    if (uses.size() > 2) {
      throw MeshFormatError("edge shared by more than two triangles");
    }
    if (uses.size() == 2) {
      if (uses[0].forward == uses[1].forward) {
        throw MeshFormatError("inconsistently oriented shared edge");
      }
      neighbors_[uses[0].tri][uses[0].opposite] = uses[1].tri;
      neighbors_[uses[1].tri][uses[1].opposite] = uses[0].tri;
    } else {
      const auto& u = uses[0];
      const int a = u.forward ? key.first : key.second;
      const int b = u.forward ? key.second : key.first;
      if (!next_directed.emplace(a, b).second) {
        throw MeshFormatError("boundary vertex " + std::to_string(a) +
                              " has two outgoing boundary edges");
      }
    }
  }
  if (next_directed.empty()) {
    throw MeshFormatError("mesh has no boundary");
  }

  // Renumber: interior vertices first (stable), boundary after.
  std::vector<bool> on_boundary(nv, false);
  for (const auto& [a, b] : next_directed) {
    on_boundary[a] = true;
    on_boundary[b] = true;
  }
  std::vector<bool> used(nv, false);
  for (const auto& t : tris_) {
    for (int v : t) used[v] = true;
  }
  for (int v = 0; v < nv; ++v) {
    if (!used[v]) {
      throw MeshFormatError("vertex " + std::to_string(v) +
                            " belongs to no triangle");
    }
  }
  std::vector<int> old_to_new(nv, -1);
  int idx = 0;
  for (int v = 0; v < nv; ++v) {
    if (!on_boundary[v]) old_to_new[v] = idx++;
  }
  n_interior_ = idx;
  for (int v = 0; v < nv; ++v) {
    if (on_boundary[v]) old_to_new[v] = idx++;
  }

  std::vector<Vec2> reordered(nv);
  for (int v = 0; v < nv; ++v) reordered[old_to_new[v]] = vertices_[v];
  vertices_ = std::move(reordered);
  for (auto& t : tris_) {
    for (int& v : t) v = old_to_new[v];
  }

  // Chain boundary edges into loops.
  std::map<int, int> next_renum;
  for (const auto& [a, b] : next_directed) {
    next_renum[old_to_new[a]] = old_to_new[b];
  }
  prev_.assign(nv, -1);
  next_.assign(nv, -1);
  std::map<int, bool> visited;
  for (const auto& [a, b] : next_renum) visited[a] = false;
  for (const auto& [start, flag] : visited) {
    if (flag) continue;
    std::vector<int> loop;
    int v = start;
    while (true) {
      loop.push_back(v);
      visited[v] = true;
      const auto it = next_renum.find(v);
      if (it == next_renum.end()) {
        throw MeshFormatError("boundary chain broke at vertex " + std::to_string(v));
      }
      v = it->second;
      if (v == start) break;
      if (visited.count(v) && visited[v]) {
        throw MeshFormatError("boundary chain re-entered a closed loop");
      }
    }
    if (loop.size() < 3) {
      throw MeshFormatError("degenerate boundary loop");
    }
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      next_[loop[i]] = loop[(i + 1) % n];
      prev_[loop[i]] = loop[(i + n - 1) % n];
    }
    loops_.push_back(std::move(loop));
  }

  patches_.assign(nv, {});
  for (int k = 0; k < ne; ++k) {
    for (int i = 0; i < 3; ++i) patches_[tris_[k][i]].push_back({k, i});
  }

  // Validate element geometry once up front.
  for (int k = 0; k < ne; ++k) elementFrame(k);
}

void TriangleMesh::setVertices(std::vector<Vec2> pts) {
  if (static_cast<int>(pts.size()) != numVertices()) {
    throw MeshFormatError("setVertices: size mismatch");
  }
  vertices_ = std::move(pts);
}

Eigen::VectorXd TriangleMesh::positionsVector() const {
  Eigen::VectorXd xy(2 * numVertices());
  for (int v = 0; v < numVertices(); ++v) {
    xy[2 * v] = vertices_[v].x();
    xy[2 * v + 1] = vertices_[v].y();
  }
  return xy;
}

void TriangleMesh::setPositionsVector(const Eigen::VectorXd& xy) {
  if (xy.size() != 2 * numVertices()) {
    throw MeshFormatError("setPositionsVector: size mismatch");
  }
  for (int v = 0; v < numVertices(); ++v) {
    vertices_[v] = Vec2(xy[2 * v], xy[2 * v + 1]);
  }
}

ElementFrame TriangleMesh::elementFrame(int k) const {
  const auto& t = tris_[k];
  const Vec2& p0 = vertices_[t[0]];
  const Vec2& p1 = vertices_[t[1]];
  const Vec2& p2 = vertices_[t[2]];
  ElementFrame f;
  f.E.col(0) = p1 - p0;
  f.E.col(1) = p2 - p0;
  f.det = f.E(0, 0) * f.E(1, 1) - f.E(0, 1) * f.E(1, 0);
  const double diam_sq = std::max({(p1 - p0).squaredNorm(), (p2 - p0).squaredNorm(),
                                   (p2 - p1).squaredNorm()});
  if (f.det <= 1e-14 * diam_sq) {
    throw NonPositiveAreaError(k, f.det);
  }
  f.area = 0.5 * f.det;
  const double inv = 1.0 / f.det;
  f.Einv(0, 0) = f.E(1, 1) * inv;
  f.Einv(0, 1) = -f.E(0, 1) * inv;
  f.Einv(1, 0) = -f.E(1, 0) * inv;
  f.Einv(1, 1) = f.E(0, 0) * inv;
  return f;
}

Vec2 TriangleMesh::boundaryNormal(int v) const {
  const int p = prev_[v];
  const int n = next_[v];
  if (p < 0 || n < 0) {
    throw MeshFormatError("boundaryNormal: vertex " + std::to_string(v) +
                          " is not on the boundary");
  }
  // Outward normal of a directed edge (a -> b) with the domain on the left is
  // the edge direction rotated by -90 degrees: (dy, -dx).
  const Vec2 e1 = vertices_[v] - vertices_[p];
  const Vec2 e2 = vertices_[n] - vertices_[v];
  const double l1 = e1.norm();
  const double l2 = e2.norm();
  if (l1 <= 0.0 || l2 <= 0.0) {
    throw MeshFormatError("boundaryNormal: zero-length boundary edge");
  }
  const Vec2 n1 = Vec2(e1.y(), -e1.x()) / l1;
  const Vec2 n2 = Vec2(e2.y(), -e2.x()) / l2;
  Vec2 nrm = n1 / l1 + n2 / l2;
  const double len = nrm.norm();
  if (len <= 0.0) {
    throw MeshFormatError("boundaryNormal: opposing edge normals cancel");
  }
  return nrm / len;
}

Vec2 TriangleMesh::boundaryTangent(int v) const {
  const int p = prev_[v];
  const int n = next_[v];
  if (p < 0 || n < 0) {
    throw MeshFormatError("boundaryTangent: vertex " + std::to_string(v) +
                          " is not on the boundary");
  }
  const Vec2 d = vertices_[n] - vertices_[p];
  const double len = d.norm();
  if (len <= 0.0) {
    throw MeshFormatError("boundaryTangent: coincident loop neighbors");
  }
  return d / len;
}

double TriangleMesh::boundaryTurnAngle(int v) const {
  const int p = prev_[v];
  const int n = next_[v];
  if (p < 0 || n < 0) {
    throw MeshFormatError("boundaryTurnAngle: vertex " + std::to_string(v) +
                          " is not on the boundary");
  }
  const Vec2 e1 = (vertices_[v] - vertices_[p]).normalized();
  const Vec2 e2 = (vertices_[n] - vertices_[v]).normalized();
  const double c = std::clamp(e1.dot(e2), -1.0, 1.0);
  return std::acos(c);
}

double TriangleMesh::totalArea() const {
  double a = 0.0;
  for (int k = 0; k < numElements(); ++k) a += elementArea(k);
  return a;
}

}  // namespace pme
