#include "pme/exact/solutions.hpp"

#include <cmath>

namespace pme {

double BarenblattPattle::lambda(double t) const {
  return std::pow(t / t0(), 1.0 / (2.0 + d * m));
}

double BarenblattPattle::lambdaDot(double t) const {
  return lambda(t) / ((2.0 + d * m) * t);
}

double BarenblattPattle::value(const Vec2& x, double t) const {
  const double lam = lambda(t);
  const double R = r0 * lam;
  const double r = x.norm();
  if (r >= R) return 0.0;
  const double s = r / R;
  return (1.0 - s * s) / (m * std::pow(lam, d * m));
}

double BarenblattPattle::radialDerivative(double r, double t) const {
  const double lam = lambda(t);
  const double R = r0 * lam;
  return -2.0 * r / (R * R * m * std::pow(lam, d * m));
}

double waitingTimeInitial(const Vec2& x) {
  const double r = x.norm();
  if (r > kWaitingTimeRadius) return 0.0;
  const double c = std::cos(r);
  return c * c / kWaitingTimeM;
}

double complexDomainInitial(const Vec2& x) {
  const double r = x.norm();
  const double q = 0.25 * 0.25;
  if (r >= 0.5 && r <= 1.0 && (x.x() < 0.0 || x.y() < 0.0)) {
    const double s = q - (r - 0.75) * (r - 0.75);
    return s > 0.0 ? 25.0 * std::pow(s, 1.5) : 0.0;
  }
  const double top = q - x.x() * x.x() - (x.y() - 0.75) * (x.y() - 0.75);
  if (top >= 0.0 && x.x() >= 0.0) {
    return 25.0 * std::pow(top, 1.5);
  }
  const double right = q - (x.x() - 0.75) * (x.x() - 0.75) - x.y() * x.y();
  if (right >= 0.0 && x.y() >= 0.0) {
    return 25.0 * std::pow(right, 1.5);
  }
  return 0.0;
}

bool complexDomainContains(const Vec2& x, double tol) {
  const double r = x.norm();
  const double q = 0.25 * 0.25;
  if (r >= 0.5 - tol && r <= 1.0 + tol && (x.x() < tol || x.y() < tol)) return true;
  if (x.x() * x.x() + (x.y() - 0.75) * (x.y() - 0.75) <= q + tol && x.x() >= -tol) return true;
  if ((x.x() - 0.75) * (x.x() - 0.75) + x.y() * x.y() <= q + tol && x.y() >= -tol) return true;
  return false;
}

double uFromV(double v, double m) {
  if (v < 0.0) {
    if (v > -1e-12) return 0.0;
    throw Error("uFromV: pressure " + std::to_string(v) + " is negative beyond roundoff");
  }
  return std::pow(m * v, 1.0 / m);
}

}  // namespace pme
