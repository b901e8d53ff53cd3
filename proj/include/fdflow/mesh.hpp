#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fdflow {

using Index = std::int32_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

using Triangle = std::array<Vec2, 3>;

inline double signed_area(const Triangle& t) {
  return 0.5 * ((t[1].x - t[0].x) * (t[2].y - t[0].y) -
                (t[2].x - t[0].x) * (t[1].y - t[0].y));
}

/// Unique undirected edge with triangle adjacency.
struct Edge {
  Index a = -1, b = -1;          // endpoint vertex ids, a < b
  Vec2 midpoint;
  std::array<Index, 2> tris = {-1, -1};
  int n_tris = 0;
  bool boundary = false;         // on the box boundary (single incident triangle)
};

/// Conforming triangulation of D = [-1,1]^2. Built either as the structured
/// background mesh (build_uniform) or by barycentric refinement of one
/// (alfeld_split). Immutable after construction.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<Index, 3>> triangles;   // CCW vertex ids
  std::vector<Edge> edges;
  std::vector<std::array<Index, 3>> tri_edges;   // edge ids for local edges (0,1),(1,2),(2,0)
  std::vector<bool> vertex_on_boundary;
  std::vector<Index> parent;                     // split child -> pre-split triangle
  double h = 0.0;                                // pre-split element diameter, 2*sqrt(2)/n
  bool is_split = false;

  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
  Index n_triangles() const { return static_cast<Index>(triangles.size()); }
  Index n_edges() const { return static_cast<Index>(edges.size()); }

  Triangle triangle_coords(Index t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }
};

/// n x n squares on [-1,1]^2, each split along the lower-left to upper-right
/// diagonal. Deterministic: identical n gives bit-identical meshes.
Mesh build_uniform(int n);

/// Replace each triangle by the three triangles through its barycenter.
Mesh alfeld_split(const Mesh& mesh);

/// Recompute the unique edge list with adjacency (already stored on Mesh;
/// exposed for direct use and for the Euler-identity checks).
std::vector<Edge> edge_table(const Mesh& mesh);

/// Plain-text dump: one "x y" line per vertex, then one "i j k" line per
/// triangle, zero-based indices.
void dump(const Mesh& mesh, std::ostream& os);

}  // namespace fdflow
