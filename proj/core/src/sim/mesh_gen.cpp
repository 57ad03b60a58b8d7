#include "pme/sim/mesh_gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "pme/exact/solutions.hpp"

namespace pme {

namespace {

constexpr double kPi = std::numbers::pi;

struct MeshDraft {
  std::vector<Vec2> pts;
  std::vector<std::array<int, 3>> tris;

  int add(const Vec2& p) {
    pts.push_back(p);
    return static_cast<int>(pts.size()) - 1;
  }
  void tri(int a, int b, int c) { tris.push_back({a, b, c}); }
};

// Stitch two closed vertex rings (angle-sorted, possibly different counts)
// with a merge walk; also handles a degenerate single-point inner "ring"
// (center fan).  Produces inner.size() + outer.size() triangles (or a fan of
// outer.size() when the inner ring is a point).
void stitchClosedRings(MeshDraft& d, const std::vector<int>& inner,
                       const std::vector<double>& inner_ang, const std::vector<int>& outer,
                       const std::vector<double>& outer_ang) {
  const int ni = static_cast<int>(inner.size());
  const int no = static_cast<int>(outer.size());
  int a = 0, b = 0;
  while (a < ni || b < no) {
    const bool a_done = a >= ni;
    const bool b_done = b >= no;
    const double next_a =
        a_done ? 1e300 : (a + 1 < ni ? inner_ang[a + 1] : inner_ang[0] + 2.0 * kPi);
    const double next_b =
        b_done ? 1e300 : (b + 1 < no ? outer_ang[b + 1] : outer_ang[0] + 2.0 * kPi);
    const int ca = inner[a % ni];
    const int cb = outer[b % no];
    if (!b_done && (a_done || next_b <= next_a) && no > 1) {
      d.tri(ca, cb, outer[(b + 1) % no]);
      ++b;
    } else if (!a_done && ni > 1) {
      d.tri(ca, cb, inner[(a + 1) % ni]);
      ++a;
    } else if (!b_done) {
      d.tri(ca, cb, outer[(b + 1) % no]);
      ++b;
    } else {
      ++a;  // single-point outer ring cannot happen; just terminate
    }
  }
}

// Stitch two open vertex chains sharing a parameter direction.
void stitchChains(MeshDraft& d, const std::vector<int>& A, const std::vector<double>& pa,
                  const std::vector<int>& B, const std::vector<double>& pb) {
  const int na = static_cast<int>(A.size());
  const int nb = static_cast<int>(B.size());
  int a = 0, b = 0;
  while (a < na - 1 || b < nb - 1) {
    const bool can_a = a < na - 1;
    const bool can_b = b < nb - 1;
    const double next_a = can_a ? pa[a + 1] : 1e300;
    const double next_b = can_b ? pb[b + 1] : 1e300;
    if (can_b && (!can_a || next_b <= next_a)) {
      d.tri(A[a], B[b], B[b + 1]);
      ++b;
    } else {
      d.tri(A[a], B[b], A[a + 1]);
      ++a;
    }
  }
}

// Guarded Laplacian smoothing of interior vertices: a move is kept only if
// all incident elements stay non-degenerate and the vertex stays inside the
// domain (membership test supplied by the caller).
TriangleMesh smoothInterior(const TriangleMesh& mesh, int passes,
                            const std::function<bool(const Vec2&)>& inside) {
  std::vector<Vec2> pos = mesh.vertices();
  // 1-ring vertex neighbors.
  std::vector<std::vector<int>> nbrs(mesh.numVertices());
  for (int v = 0; v < mesh.numInterior(); ++v) {
    std::vector<int>& list = nbrs[v];
    for (const PatchEntry& pe : mesh.patch(v)) {
      const auto& t = mesh.tri(pe.element);
      for (int i = 0; i < 3; ++i) {
        if (t[i] != v && std::find(list.begin(), list.end(), t[i]) == list.end()) {
          list.push_back(t[i]);
        }
      }
    }
  }
  auto patch_ok = [&](int v, const Vec2& cand) {
    for (const PatchEntry& pe : mesh.patch(v)) {
      const auto& t = mesh.tri(pe.element);
      Vec2 p[3];
      for (int i = 0; i < 3; ++i) p[i] = t[i] == v ? cand : pos[t[i]];
      const double det = (p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                         (p[1].y() - p[0].y()) * (p[2].x() - p[0].x());
      const double d2 = std::max({(p[1] - p[0]).squaredNorm(), (p[2] - p[0]).squaredNorm(),
                                  (p[2] - p[1]).squaredNorm()});
      if (det <= 1e-12 * d2) return false;
    }
    return true;
  };
  for (int pass = 0; pass < passes; ++pass) {
    for (int v = 0; v < mesh.numInterior(); ++v) {
      Vec2 avg(0.0, 0.0);
      for (int u : nbrs[v]) avg += pos[u];
      avg /= static_cast<double>(nbrs[v].size());
      const Vec2 cand = pos[v] + 0.6 * (avg - pos[v]);
      if (inside(cand) && patch_ok(v, cand)) pos[v] = cand;
    }
  }
  TriangleMesh out = mesh;
  out.setVertices(pos);
  return out;
}

TriangleMesh buildDisk(double radius, int n_r) {
  MeshDraft d;
  std::vector<int> prev_ids{d.add(Vec2(0.0, 0.0))};
  std::vector<double> prev_ang{0.0};
  for (int i = 1; i <= n_r; ++i) {
    const double r = radius * i / n_r;
    const int m = std::max(6, static_cast<int>(std::lround(2.0 * kPi * i)));
    const double offset = (i % 2) * kPi / m;
    std::vector<int> ids(m);
    std::vector<double> ang(m);
    for (int j = 0; j < m; ++j) {
      ang[j] = offset + 2.0 * kPi * j / m;
      ids[j] = d.add(Vec2(r * std::cos(ang[j]), r * std::sin(ang[j])));
    }
    stitchClosedRings(d, prev_ids, prev_ang, ids, ang);
    prev_ids = std::move(ids);
    prev_ang = std::move(ang);
  }
  return TriangleMesh(d.pts, d.tris);
}

TriangleMesh buildComplexSupport(int n_r) {
  // Annular band r in [0.5, 1], theta in [pi/2, 2 pi], structured grid.
  const double delta = 0.5 / n_r;
  const int n_c = n_r / 2;  // cap radial rings; n_r must be even
  const double arc = 1.5 * kPi * 0.75;
  const int n_t = std::max(8, static_cast<int>(std::lround(arc / delta)));
  MeshDraft d;
  auto band_id = [&](int i, int k) { return i * (n_t + 1) + k; };
  for (int i = 0; i <= n_r; ++i) {
    const double r = 0.5 + 0.5 * i / n_r;
    for (int k = 0; k <= n_t; ++k) {
      const double th = 0.5 * kPi + 1.5 * kPi * k / n_t;
      d.add(Vec2(r * std::cos(th), r * std::sin(th)));
    }
  }
  for (int i = 0; i < n_r; ++i) {
    for (int k = 0; k < n_t; ++k) {
      d.tri(band_id(i, k), band_id(i + 1, k), band_id(i + 1, k + 1));
      d.tri(band_id(i, k), band_id(i + 1, k + 1), band_id(i, k + 1));
    }
  }

  // Half-disk caps close the band ends.  Cap rings reference the band-edge
  // vertices as their diameter endpoints so the mesh is conforming without
  // any vertex welding.
  struct CapSpec {
    Vec2 center;
    double alpha0;  // angle of the "bottom" diameter endpoint direction
    int band_col;   // band column supplying the diameter vertices
  };
  // Cap at (0, 0.75) bulges toward +x: angles from -pi/2 (bottom) to +pi/2.
  // Cap at (0.75, 0) bulges toward +y: angles from 0 (right) to pi (left);
  // its "bottom" endpoint (alpha = 0) is the outer band vertex.
  const CapSpec caps[2] = {{Vec2(0.0, 0.75), -0.5 * kPi, 0},
                           {Vec2(0.75, 0.0), 0.0, n_t}};
  for (const CapSpec& cap : caps) {
    const bool first = cap.band_col == 0;
    // off in [-n_c, n_c]: signed radial offset from the cap center along the
    // band column that forms the cap diameter.
    auto diameter_id = [&](int off) { return band_id(n_r / 2 + off, cap.band_col); };
    std::vector<int> prev{diameter_id(0)};
    std::vector<double> prev_par{0.0};
    for (int j = 1; j <= n_c; ++j) {
      const double rho = 0.25 * j / n_c;
      const int segs = std::max(2, static_cast<int>(std::lround(kPi * rho / delta)));
      std::vector<int> ids;
      std::vector<double> par;
      // Bottom diameter endpoint.
      ids.push_back(diameter_id(first ? -j : j));
      par.push_back(0.0);
      for (int s = 1; s < segs; ++s) {
        const double alpha = cap.alpha0 + kPi * s / segs;
        ids.push_back(d.add(cap.center + rho * Vec2(std::cos(alpha), std::sin(alpha))));
        par.push_back(kPi * s / segs);
      }
      ids.push_back(diameter_id(first ? j : -j));
      par.push_back(kPi);
      stitchChains(d, prev, prev_par, ids, par);
      prev = std::move(ids);
      prev_par = std::move(par);
    }
  }
  return TriangleMesh(d.pts, d.tris);
}

TriangleMesh pickBest(int target, int lo, int hi, int stride,
                      const std::function<TriangleMesh(int)>& build,
                      const std::function<bool(const Vec2&)>& inside,
                      const char* what) {
  TriangleMesh best;
  int best_dev = -1;
  for (int n = lo; n <= hi; n += stride) {
    TriangleMesh m;
    try {
      m = build(n);
    } catch (const Error&) {
      continue;
    }
    const int dev = std::abs(m.numElements() - target);
    if (best_dev < 0 || dev < best_dev) {
      best_dev = dev;
      best = std::move(m);
    }
    if (m.numElements() > 2 * target) break;
  }
  if (best_dev < 0 || best_dev > 0.2 * target) {
    throw GenerationError(std::string(what) + ": no candidate within 20% of target " +
                          std::to_string(target));
  }
  return smoothInterior(best, 4, inside);
}

}  // namespace

TriangleMesh generateDiskMesh(double radius, int target_elements) {
  if (radius <= 0.0 || target_elements < 4) {
    throw GenerationError("generateDiskMesh: bad arguments");
  }
  const double r2 = radius * radius * (1.0 + 1e-12);
  return pickBest(
      target_elements, 1, 400, 1, [&](int n_r) { return buildDisk(radius, n_r); },
      [&](const Vec2& p) { return p.squaredNorm() <= r2; }, "generateDiskMesh");
}

TriangleMesh generateComplexSupportMesh(int target_elements) {
  if (target_elements < 40) {
    throw GenerationError("generateComplexSupportMesh: target too small");
  }
  return pickBest(
      target_elements, 2, 120, 2, [&](int n_r) { return buildComplexSupport(n_r); },
      [&](const Vec2& p) { return complexDomainContains(p, 1e-9); },
      "generateComplexSupportMesh");
}

}  // namespace pme
