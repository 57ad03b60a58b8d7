#pragma once

#include "pme/geometry/mesh.hpp"

namespace pme {

// Self-similar radially symmetric exact solution of the pressure-form porous
// medium equation in 2D: the support is the disk of radius r0*lambda(t) and
//
//   v(x, t) = (1 - (|x| / (r0 lambda))^2) / (m lambda^{d m}),
//   lambda(t) = (t / t0)^{1/(2 + d m)},  t0 = r0^2 m / (2 (2 + d m)).
//
// At t = t0 the profile has lambda = 1, so runs are conventionally started
// there.  The boundary obeys R'(t) = -dv/dr evaluated at R(t) = r0 lambda(t).
struct BarenblattPattle {
  double m = 2.0;
  double r0 = 0.5;
  static constexpr int d = 2;

  double t0() const { return r0 * r0 * m / (2.0 * (2.0 + d * m)); }
  double lambda(double t) const;
  double lambdaDot(double t) const;
  double supportRadius(double t) const { return r0 * lambda(t); }
  double supportRadiusRate(double t) const { return r0 * lambdaDot(t); }

  // Pressure at a point (0 outside the support).
  double value(const Vec2& x, double t) const;

  // Radial derivative dv/dr just inside the support edge, at radius r < R(t).
  double radialDerivative(double r, double t) const;
};

// Initial pressure with zero boundary slope (the free boundary stays put for
// a finite waiting time): v0 = cos^m(|x|)/m on |x| <= pi/2, here with m = 2.
double waitingTimeInitial(const Vec2& x);
constexpr double kWaitingTimeM = 2.0;
constexpr double kWaitingTimeRadius = 1.5707963267948966;  // pi/2

// Initial pressure supported on a C-shaped region: a three-quarter annulus
// 0.5 <= |x| <= 1 (for x < 0 or y < 0) closed by two half-disk caps of radius
// 0.25 centered at (0, 0.75) and (0.75, 0).  Used with m = 2.
double complexDomainInitial(const Vec2& x);
constexpr double kComplexDomainM = 2.0;
bool complexDomainContains(const Vec2& x, double tol = 1e-10);

// Density from pressure: u = (m v)^{1/m}.  Values in (-1e-12, 0) are treated
// as roundoff and clamped to zero; anything more negative is an error.
double uFromV(double v, double m);

}  // namespace pme
