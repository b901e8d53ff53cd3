#include "fdflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fdflow {

namespace {

void push_perm3(TriRule& r, double a, double w) {
  // orbit of (a, a, 1-2a)
  const double c = 1.0 - 2.0 * a;
  r.points.push_back({a, a, c});
  r.points.push_back({a, c, a});
  r.points.push_back({c, a, a});
  r.weights.insert(r.weights.end(), 3, w);
}

void push_perm6(TriRule& r, double a, double b, double c, double w) {
  r.points.push_back({a, b, c});
  r.points.push_back({a, c, b});
  r.points.push_back({b, a, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  r.points.push_back({c, b, a});
  r.weights.insert(r.weights.end(), 6, w);
}

TriRule make_degree4() {
  TriRule r;
  r.degree = 4;
  push_perm3(r, 0.445948490915965, 0.223381589678011);
  push_perm3(r, 0.091576213509771, 0.109951743655322);
  return r;
}

TriRule make_degree5() {
  TriRule r;
  r.degree = 5;
  const double s15 = std::sqrt(15.0);
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(9.0 / 40.0);
  push_perm3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
  push_perm3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
  return r;
}

TriRule make_degree6() {
  TriRule r;
  r.degree = 6;
  push_perm3(r, 0.249286745170910, 0.116786275726379);
  push_perm3(r, 0.063089014491502, 0.050844906370207);
  push_perm6(r, 0.310352451033785, 0.636502499121399, 0.053145049844816,
             0.082851075618374);
  return r;
}

}  // namespace

const TriRule& tri_rule(int degree) {
  static const TriRule r4 = make_degree4();
  static const TriRule r5 = make_degree5();
  static const TriRule r6 = make_degree6();
  switch (degree) {
    case 4: return r4;
    case 5: return r5;
    case 6: return r6;
    default: throw std::invalid_argument("tri_rule: unsupported degree");
  }
}

}  // namespace fdflow
