#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "pme/exact/solutions.hpp"
#include "pme/geometry/mesh.hpp"
#include "pme/metric/metric.hpp"

namespace pme::testing {

// Unit square split into four triangles around the center vertex.  The center
// is the only interior vertex.
inline TriangleMesh makeCrossSquare() {
  std::vector<Vec2> pts = {
      {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
  std::vector<std::array<int, 3>> tris = {
      {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  return TriangleMesh(std::move(pts), std::move(tris));
}

// Structured right-triangle grid of the unit square with (nx+1)^2 vertices.
inline TriangleMesh makeStructuredSquare(int nx) {
  std::vector<Vec2> pts;
  for (int j = 0; j <= nx; ++j)
    for (int i = 0; i <= nx; ++i)
      pts.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / nx});
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < nx; ++j)
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriangleMesh(std::move(pts), std::move(tris));
}

// Fan around the origin with n boundary vertices on the circle of the given
// radius (a regular n-gon disk).
inline TriangleMesh makePolygonFan(int n, double radius) {
  std::vector<Vec2> pts = {{0.0, 0.0}};
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i) tris.push_back({0, 1 + i, 1 + (i + 1) % n});
  return TriangleMesh(std::move(pts), std::move(tris));
}

// 4x4-cell structured square with the four center cells removed: one outer
// boundary loop and one inner (hole) loop.
inline TriangleMesh makeSquareWithHole() {
  const int nx = 4;
  std::vector<Vec2> pts;
  for (int j = 0; j <= nx; ++j)
    for (int i = 0; i <= nx; ++i)
      pts.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / nx});
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < nx; ++j)
    for (int i = 0; i < nx; ++i) {
      if ((i == 1 || i == 2) && (j == 1 || j == 2)) continue;  // the hole
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  // The vertex strictly inside the hole is unused; compact it away.
  std::vector<int> remap(pts.size(), -1);
  std::vector<Vec2> used;
  for (const auto& t : tris)
    for (int v : t)
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(pts[v]);
      }
  for (auto& t : tris)
    for (int& v : t) v = remap[v];
  return TriangleMesh(std::move(used), std::move(tris));
}

// Randomly perturbed 2x2-cell structured square (8 elements, one interior
// vertex); retries until every element keeps a healthy positive area.
inline TriangleMesh makeRandomSmallMesh(std::mt19937& rng, double amplitude = 0.18) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  for (;;) {
    TriangleMesh mesh = makeStructuredSquare(2);
    for (int v = 0; v < mesh.numVertices(); ++v) {
      Vec2 p = mesh.vertex(v);
      mesh.setVertex(v, p + Vec2(u(rng) / 2.0, u(rng) / 2.0));
    }
    bool ok = true;
    try {
      for (int k = 0; k < mesh.numElements(); ++k) {
        if (mesh.elementFrame(k).area < 1e-3) {
          ok = false;
          break;
        }
      }
    } catch (const NonPositiveAreaError&) {
      ok = false;
    }
    if (ok) return mesh;
  }
}

// Uniform scalar metric c on every element and vertex of the mesh.
inline MmpdeMetric makeUniformMetric(const TriangleMesh& mesh, double c) {
  MmpdeMetric metric;
  metric.elem_c = Eigen::VectorXd::Constant(mesh.numElements(), c);
  metric.vert_c = Eigen::VectorXd::Constant(mesh.numVertices(), c);
  return metric;
}

// Scale a metric field by a constant factor (M -> c*M scales both tables).
inline MmpdeMetric scaleMetric(const MmpdeMetric& metric, double c) {
  MmpdeMetric out = metric;
  out.elem_c *= c;
  out.vert_c *= c;
  return out;
}

// Random strictly positive metric, for invariance properties.
inline MmpdeMetric makeRandomMetric(const TriangleMesh& mesh, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  MmpdeMetric metric;
  metric.elem_c.resize(mesh.numElements());
  metric.vert_c.resize(mesh.numVertices());
  for (int k = 0; k < mesh.numElements(); ++k) metric.elem_c[k] = u(rng);
  for (int v = 0; v < mesh.numVertices(); ++v) metric.vert_c[v] = u(rng);
  return metric;
}

// Nodal interpolant of the self-similar benchmark pressure at time t, with
// boundary entries forced to exact zeros.
inline Eigen::VectorXd bpInterpolant(const TriangleMesh& mesh,
                                     const BarenblattPattle& bp, double t) {
  Eigen::VectorXd v(mesh.numVertices());
  for (int j = 0; j < mesh.numVertices(); ++j)
    v[j] = mesh.isBoundaryVertex(j) ? 0.0 : bp.value(mesh.vertex(j), t);
  return v;
}

inline double relErr(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace pme::testing
