#pragma once

#include <array>
#include <vector>

#include "fdflow/mesh.hpp"

namespace fdflow {

/// The immersed domain: Omega = {phi < 0} is the open disk of radius
/// 1/sqrt(2) centered at the origin, D = [-1,1]^2 the background box,
/// D1 = D \ Omega the penalized region. Boundary convention: phi = 0 points
/// belong to Omega (xi = 0 there).
struct LevelSet {
  static constexpr double r_squared = 0.5;
  static constexpr double box_lo = -1.0;
  static constexpr double box_hi = 1.0;

  double phi(Vec2 p) const { return p.x * p.x + p.y * p.y - r_squared; }
  double xi(Vec2 p) const { return phi(p) <= 0.0 ? 0.0 : 1.0; }
};

double phi(Vec2 p);
double xi(Vec2 p);

enum class ElementClass { Inside, Outside, Cut };
enum class Side { Omega, D1 };

/// Sign-sample a triangle against the level set. `samples` sets the density
/// of the barycentric lattice used in addition to vertices and edge
/// midpoints; a sign change anywhere yields Cut.
ElementClass classify(const Triangle& tri, const LevelSet& ls, int samples = 16);

/// Quadrature restricted to one side of the level set within one triangle.
/// Points are physical coordinates; `bary` stores the matching barycentric
/// coordinates with respect to the original triangle (assembly convenience).
/// `pieces` lists the kept sub-triangles the rule was built on, so tests can
/// re-integrate each piece independently.
struct CutQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<std::array<double, 3>> bary;
  std::vector<Triangle> pieces;
  int depth = 0;

  size_t size() const { return weights.size(); }
};

/// Recursive quadrisection guided by the sign pattern of phi at vertices,
/// edge midpoints, and centroid of each sub-triangle; uniform-sign
/// sub-triangles receive the standard base rule whole. At the deepest level a
/// still-cut sub-triangle is split along the zero chord of the linear
/// interpolant of phi and each piece goes to the side of its centroid.
/// base_order >= 4 (exactness of the base rule); depth in [0, 12].
CutQuadrature cut_rule(const Triangle& tri, const LevelSet& ls, Side side,
                       int depth, int base_order);

/// Per-mesh classification cache with cut rules for the Cut elements.
/// Inside/Outside elements carry no stored rule: their Omega/D1 rule is the
/// standard reference rule (or empty), applied directly by callers.
struct Geometry {
  const Mesh* mesh = nullptr;
  LevelSet levelset;
  int depth = 5;
  int base_order = 4;
  std::vector<ElementClass> cls;
  std::vector<Index> cut_index;          // element -> slot in rules, -1 if uncut
  std::vector<CutQuadrature> omega_rules;
  std::vector<CutQuadrature> d1_rules;

  Index n_cut() const { return static_cast<Index>(omega_rules.size()); }
};

Geometry build_geometry(const Mesh& mesh, int depth = 5, int base_order = 4,
                        int samples = 16);

/// Total quadrature area of one side over the whole mesh (uncut elements
/// contribute their full area or nothing).
double total_area(const Geometry& geom, Side side);

}  // namespace fdflow
