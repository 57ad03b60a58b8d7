#include "pme/geometry/point_locator.hpp"

#include <limits>

namespace pme {

Eigen::Vector3d PointLocator::baryIn(int k, const Vec2& p) const {
  const ElementFrame f = mesh_.elementFrame(k);
  const Vec2 rhs = p - mesh_.vertex(mesh_.tri(k)[0]);
  const Vec2 l12 = f.Einv * rhs;
  return {1.0 - l12.x() - l12.y(), l12.x(), l12.y()};
}

LocateResult PointLocator::scanAll(const Vec2& p) const {
  LocateResult best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < mesh_.numElements(); ++k) {
    const Eigen::Vector3d b = baryIn(k, p);
    const double m = b.minCoeff();
    if (m > best_min) {
      best_min = m;
      best.element = k;
      best.bary = b;
    }
  }
  best.found = best_min >= -kBaryTol;
  return best;
}

LocateResult PointLocator::locate(const Vec2& p, int hint) {
  int k = hint >= 0 ? hint : (last_hit_ >= 0 ? last_hit_ : 0);
  int prev = -1;
  const int max_steps = 2 * mesh_.numElements() + 8;
  for (int step = 0; step < max_steps; ++step) {
    const Eigen::Vector3d b = baryIn(k, p);
    int worst = 0;
    if (b[1] < b[worst]) worst = 1;
    if (b[2] < b[worst]) worst = 2;
    if (b[worst] >= -kBaryTol) {
      last_hit_ = k;
      return {true, k, b};
    }
    // Negative coordinate i means p lies beyond the edge opposite vertex i.
    int nk = mesh_.neighbor(k, worst);
    if (nk == prev && nk >= 0) {
      // Avoid a two-element ping-pong: try the second-most violated edge.
      int second = -1;
      double second_val = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (i == worst) continue;
        if (b[i] < second_val) {
          second_val = b[i];
          second = i;
        }
      }
      nk = second >= 0 ? mesh_.neighbor(k, second) : -1;
    }
    if (nk < 0) break;  // walked off the mesh; resolve by full scan
    prev = k;
    k = nk;
  }
  LocateResult r = scanAll(p);
  if (r.found) last_hit_ = r.element;
  return r;
}

}  // namespace pme
