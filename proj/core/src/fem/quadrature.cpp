#include "pme/fem/quadrature.hpp"

namespace pme {

namespace {

void addPerm3(TriQuadrature& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  q.points.emplace_back(b, a, a);
  q.points.emplace_back(a, b, a);
  q.points.emplace_back(a, a, b);
  q.weights.insert(q.weights.end(), 3, w);
}

void addPerm6(TriQuadrature& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  q.points.emplace_back(a, b, c);
  q.points.emplace_back(a, c, b);
  q.points.emplace_back(b, a, c);
  q.points.emplace_back(b, c, a);
  q.points.emplace_back(c, a, b);
  q.points.emplace_back(c, b, a);
  q.weights.insert(q.weights.end(), 6, w);
}

}  // namespace

const TriQuadrature& TriQuadrature::degree2() {
  static const TriQuadrature rule = [] {
    TriQuadrature q;
    addPerm3(q, 0.5, 1.0 / 3.0);  // edge midpoints
    return q;
  }();
  return rule;
}

const TriQuadrature& TriQuadrature::degree4() {
  static const TriQuadrature rule = [] {
    TriQuadrature q;
    addPerm3(q, 0.445948490915965, 0.223381589678011);
    addPerm3(q, 0.091576213509771, 0.109951743655322);
    return q;
  }();
  return rule;
}

const TriQuadrature& TriQuadrature::degree6() {
  static const TriQuadrature rule = [] {
    TriQuadrature q;
    addPerm3(q, 0.249286745170910, 0.116786275726379);
    addPerm3(q, 0.063089014491502, 0.050844906370207);
    addPerm6(q, 0.310352451033785, 0.636502499121399, 0.082851075618374);
    return q;
  }();
  return rule;
}

}  // namespace pme
