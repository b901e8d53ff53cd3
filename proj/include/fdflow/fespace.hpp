#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fdflow/mesh.hpp"
#include "fdflow/quadrature.hpp"

namespace fdflow {

/// P2 scalar basis on the reference triangle, nodal order
/// [v0, v1, v2, e01, e12, e20] matching Mesh::tri_edges local edge order.
struct P2Basis {
  std::array<double, 6> val;
  std::array<Vec2, 6> grad;  // physical gradients
};

/// Values of the 6 P2 shape functions at a barycentric point.
std::array<double, 6> p2_values(const std::array<double, 3>& l);

/// Barycentric gradients: d(shape)/d(lambda) contracted later with the
/// element's lambda-gradients. Row i holds dN_i/dl0, dN_i/dl1, dN_i/dl2.
std::array<std::array<double, 3>, 6> p2_bary_gradients(const std::array<double, 3>& l);

/// P1 values at a barycentric point are the coordinates themselves.
inline std::array<double, 3> p1_values(const std::array<double, 3>& l) {
  return {l[0], l[1], l[2]};
}

/// Physical gradients of the barycentric coordinates of a triangle.
std::array<Vec2, 3> lambda_gradients(const Triangle& tri);

/// Values and physical gradients of all 6 velocity shape functions.
P2Basis eval_velocity_basis(const Triangle& tri, const std::array<double, 3>& l);

/// Continuous vector P2 space on the split mesh. Scalar nodes are the mesh
/// vertices followed by the edge midpoints; a vector dof is comp * n_scalar +
/// node. Boundary nodes (on the box boundary) are masked to zero.
struct VelocitySpace {
  const Mesh* mesh = nullptr;
  Index n_scalar = 0;                       // vertices + edges
  std::vector<std::array<Index, 6>> element_nodes;
  std::vector<bool> node_on_boundary;
  std::vector<Vec2> node_coords;

  Index n_dofs() const { return 2 * n_scalar; }
  Index dof(int comp, Index node) const { return comp * n_scalar + node; }
  bool dof_on_boundary(Index d) const { return node_on_boundary[d % n_scalar]; }
};

/// Discontinuous P1: three vertex-attached dofs per triangle, dof = 3t + i.
struct PressureSpace {
  const Mesh* mesh = nullptr;
  Index n_dofs() const { return 3 * mesh->n_triangles(); }
  Index dof(Index t, int i) const { return 3 * t + i; }
};

std::pair<VelocitySpace, PressureSpace> build_spaces(const Mesh& mesh);

/// Nodal interpolant of a smooth vector field (component-major layout).
std::vector<double> interpolate(const VelocitySpace& vs,
                                const std::function<Vec2(Vec2)>& field);

/// Evaluate a velocity coefficient vector at a barycentric point of element t.
Vec2 evaluate_velocity(const VelocitySpace& vs, const std::vector<double>& u,
                       Index t, const std::array<double, 3>& l);

/// Gradient as g[i][j] = d u_i / d x_j.
std::array<std::array<double, 2>, 2> evaluate_velocity_gradient(
    const VelocitySpace& vs, const std::vector<double>& u, Index t,
    const std::array<double, 3>& l);

}  // namespace fdflow
