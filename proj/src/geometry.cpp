#include "fdflow/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "fdflow/kernels.hpp"
#include "fdflow/quadrature.hpp"

namespace fdflow {

namespace {

const LevelSet kDefaultLevelSet{};

Vec2 tri_centroid(const Triangle& t) {
  return (1.0 / 3.0) * (t[0] + t[1] + t[2]);
}

// Sign summary of phi over a sample set: -1 all negative, +1 all positive,
// 0 mixed (a zero sample counts as mixed so the caller refines).
int sign_summary(const double* vals, size_t n) {
  bool any_neg = false, any_pos = false;
  for (size_t i = 0; i < n; ++i) {
    if (vals[i] < 0.0) any_neg = true;
    else if (vals[i] > 0.0) any_pos = true;
    else return 0;
  }
  if (any_neg && any_pos) return 0;
  return any_neg ? -1 : +1;
}

struct RuleBuilder {
  const LevelSet& ls;
  const TriRule& base;
  Side side;
  CutQuadrature out;

  void emit(const Triangle& t, const Triangle& root) {
    const double area = signed_area(t);
    out.pieces.push_back(t);
    // Barycentric coordinates with respect to the root triangle: affine, so
    // map the sub-triangle's own barycentric combination of its vertices.
    const double root_area = signed_area(root);
    for (size_t q = 0; q < base.points.size(); ++q) {
      const auto& l = base.points[q];
      Vec2 x = l[0] * t[0] + l[1] * t[1] + l[2] * t[2];
      out.points.push_back(x);
      out.weights.push_back(base.weights[q] * area);
      // Barycentric via signed sub-areas against the root vertices.
      double l0 = signed_area({x, root[1], root[2]}) / root_area;
      double l1 = signed_area({root[0], x, root[2]}) / root_area;
      out.bary.push_back({l0, l1, 1.0 - l0 - l1});
    }
  }

  // Split by the zero chord of the linear interpolant of phi at the vertices,
  // then assign each piece by the sign of phi at its centroid. Falls back to
  // whole-triangle centroid assignment when no strict sign change exists.
  void chord_split(const Triangle& t, const Triangle& root) {
    const double v0 = ls.phi(t[0]), v1 = ls.phi(t[1]), v2 = ls.phi(t[2]);
    const double v[3] = {v0, v1, v2};
    int iso = -1;
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3, k = (i + 2) % 3;
      if (v[i] * v[j] < 0.0 && v[i] * v[k] < 0.0) { iso = i; break; }
    }
    if (iso < 0) {
      assign_by_centroid(t, root);
      return;
    }
    const int i = iso, j = (i + 1) % 3, k = (i + 2) % 3;
    const double tj = v[i] / (v[i] - v[j]);
    const double tk = v[i] / (v[i] - v[k]);
    const Vec2 a = t[i] + tj * (t[j] - t[i]);
    const Vec2 b = t[i] + tk * (t[k] - t[i]);
    assign_by_centroid({t[i], a, b}, root);
    assign_by_centroid({a, t[j], t[k]}, root);
    assign_by_centroid({a, t[k], b}, root);
  }

  void assign_by_centroid(const Triangle& t, const Triangle& root) {
    const bool omega = ls.phi(tri_centroid(t)) <= 0.0;
    if ((side == Side::Omega) == omega) emit(t, root);
  }

  void descend(const Triangle& t, const Triangle& root, int depth) {
    const Vec2 m01 = 0.5 * (t[0] + t[1]);
    const Vec2 m12 = 0.5 * (t[1] + t[2]);
    const Vec2 m20 = 0.5 * (t[2] + t[0]);
    const double vals[7] = {ls.phi(t[0]),  ls.phi(t[1]),  ls.phi(t[2]),
                            ls.phi(m01),   ls.phi(m12),   ls.phi(m20),
                            ls.phi(tri_centroid(t))};
    const int s = sign_summary(vals, 7);
    if (s < 0) {
      if (side == Side::Omega) emit(t, root);
      return;
    }
    if (s > 0) {
      if (side == Side::D1) emit(t, root);
      return;
    }
    if (depth == 0) {
      chord_split(t, root);
      return;
    }
    descend({t[0], m01, m20}, root, depth - 1);
    descend({m01, t[1], m12}, root, depth - 1);
    descend({m20, m12, t[2]}, root, depth - 1);
    descend({m01, m12, m20}, root, depth - 1);
  }
};

}  // namespace

double phi(Vec2 p) { return kDefaultLevelSet.phi(p); }
double xi(Vec2 p) { return kDefaultLevelSet.xi(p); }

ElementClass classify(const Triangle& tri, const LevelSet& ls, int samples) {
  if (samples < 1) samples = 1;
  // Smallest barycentric lattice order m with (m+1)(m+2)/2 >= samples.
  int m = 1;
  while ((m + 1) * (m + 2) / 2 < samples) ++m;

  std::vector<double> xs, ys;
  xs.reserve(static_cast<size_t>((m + 1) * (m + 2) / 2 + 3));
  ys.reserve(xs.capacity());
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m - i; ++j) {
      const double l0 = static_cast<double>(i) / m;
      const double l1 = static_cast<double>(j) / m;
      const double l2 = 1.0 - l0 - l1;
      Vec2 p = l0 * tri[0] + l1 * tri[1] + l2 * tri[2];
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
  }
  for (int e = 0; e < 3; ++e) {
    Vec2 p = 0.5 * (tri[e] + tri[(e + 1) % 3]);
    xs.push_back(p.x);
    ys.push_back(p.y);
  }

  std::vector<double> vals(xs.size());
  if (ls.r_squared == 0.5) {
    // levelset_circle_batch evaluates x^2 + y^2 - 1/2, i.e. this level set.
    kernels::levelset_circle_batch(xs.data(), ys.data(), vals.data(), xs.size());
  } else {
    for (size_t i = 0; i < xs.size(); ++i) vals[i] = ls.phi({xs[i], ys[i]});
  }
  const int s = sign_summary(vals.data(), vals.size());
  if (s < 0) return ElementClass::Inside;
  if (s > 0) return ElementClass::Outside;
  return ElementClass::Cut;
}

CutQuadrature cut_rule(const Triangle& tri, const LevelSet& ls, Side side,
                       int depth, int base_order) {
  if (depth < 0 || depth > 12)
    throw std::invalid_argument("cut_rule: depth must be in [0, 12]");
  if (base_order < 4)
    throw std::invalid_argument("cut_rule: base_order must be >= 4");

  RuleBuilder b{ls, tri_rule(base_order), side, {}};
  b.out.depth = depth;
  b.descend(tri, tri, depth);
  return b.out;
}

Geometry build_geometry(const Mesh& mesh, int depth, int base_order,
                        int samples) {
  Geometry g;
  g.mesh = &mesh;
  g.depth = depth;
  g.base_order = base_order;
  g.cls.resize(mesh.n_triangles());
  g.cut_index.assign(mesh.n_triangles(), -1);

  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const Triangle tri = mesh.triangle_coords(t);
    g.cls[t] = classify(tri, g.levelset, samples);
    if (g.cls[t] == ElementClass::Cut) {
      g.cut_index[t] = static_cast<Index>(g.omega_rules.size());
      g.omega_rules.push_back(cut_rule(tri, g.levelset, Side::Omega, depth, base_order));
      g.d1_rules.push_back(cut_rule(tri, g.levelset, Side::D1, depth, base_order));
    }
  }
  return g;
}

double total_area(const Geometry& geom, Side side) {
  double sum = 0.0;
  const Mesh& mesh = *geom.mesh;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    switch (geom.cls[t]) {
      case ElementClass::Inside:
        if (side == Side::Omega) sum += signed_area(mesh.triangle_coords(t));
        break;
      case ElementClass::Outside:
        if (side == Side::D1) sum += signed_area(mesh.triangle_coords(t));
        break;
      case ElementClass::Cut: {
        const auto& r = (side == Side::Omega)
                            ? geom.omega_rules[geom.cut_index[t]]
                            : geom.d1_rules[geom.cut_index[t]];
        for (double w : r.weights) sum += w;
        break;
      }
    }
  }
  return sum;
}

}  // namespace fdflow
