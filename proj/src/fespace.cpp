#include "fdflow/fespace.hpp"

#include <stdexcept>

namespace fdflow {

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0),
          l[1] * (2.0 * l[1] - 1.0),
          l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],
          4.0 * l[1] * l[2],
          4.0 * l[2] * l[0]};
}

std::array<std::array<double, 3>, 6> p2_bary_gradients(
    const std::array<double, 3>& l) {
  return {{{4.0 * l[0] - 1.0, 0.0, 0.0},
           {0.0, 4.0 * l[1] - 1.0, 0.0},
           {0.0, 0.0, 4.0 * l[2] - 1.0},
           {4.0 * l[1], 4.0 * l[0], 0.0},
           {0.0, 4.0 * l[2], 4.0 * l[1]},
           {4.0 * l[2], 0.0, 4.0 * l[0]}}};
}

std::array<Vec2, 3> lambda_gradients(const Triangle& tri) {
  const double a2 = 2.0 * signed_area(tri);
  if (a2 == 0.0) throw std::invalid_argument("lambda_gradients: degenerate element");
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Vec2& pj = tri[(i + 1) % 3];
    const Vec2& pk = tri[(i + 2) % 3];
    g[i] = {(pj.y - pk.y) / a2, (pk.x - pj.x) / a2};
  }
  return g;
}

P2Basis eval_velocity_basis(const Triangle& tri, const std::array<double, 3>& l) {
  P2Basis b;
  b.val = p2_values(l);
  const auto bg = p2_bary_gradients(l);
  const auto lg = lambda_gradients(tri);
  for (int i = 0; i < 6; ++i) {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) g = g + bg[i][k] * lg[k];
    b.grad[i] = g;
  }
  return b;
}

std::pair<VelocitySpace, PressureSpace> build_spaces(const Mesh& mesh) {
  if (!mesh.is_split)
    throw std::invalid_argument("build_spaces: mesh must be Alfeld-split");

  VelocitySpace vs;
  vs.mesh = &mesh;
  const Index nv = mesh.n_vertices();
  vs.n_scalar = nv + mesh.n_edges();

  vs.element_nodes.resize(mesh.n_triangles());
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& te = mesh.tri_edges[t];
    vs.element_nodes[t] = {tri[0], tri[1], tri[2],
                           nv + te[0], nv + te[1], nv + te[2]};
  }

  vs.node_coords.resize(vs.n_scalar);
  vs.node_on_boundary.assign(vs.n_scalar, false);
  for (Index v = 0; v < nv; ++v) {
    vs.node_coords[v] = mesh.vertices[v];
    vs.node_on_boundary[v] = mesh.vertex_on_boundary[v];
  }
  for (Index e = 0; e < mesh.n_edges(); ++e) {
    vs.node_coords[nv + e] = mesh.edges[e].midpoint;
    vs.node_on_boundary[nv + e] = mesh.edges[e].boundary;
  }

  PressureSpace ps;
  ps.mesh = &mesh;
  return {vs, ps};
}

std::vector<double> interpolate(const VelocitySpace& vs,
                                const std::function<Vec2(Vec2)>& field) {
  std::vector<double> u(static_cast<size_t>(vs.n_dofs()), 0.0);
  for (Index s = 0; s < vs.n_scalar; ++s) {
    const Vec2 v = field(vs.node_coords[s]);
    u[vs.dof(0, s)] = v.x;
    u[vs.dof(1, s)] = v.y;
  }
  return u;
}

Vec2 evaluate_velocity(const VelocitySpace& vs, const std::vector<double>& u,
                       Index t, const std::array<double, 3>& l) {
  const auto val = p2_values(l);
  const auto& nodes = vs.element_nodes[t];
  Vec2 out{0.0, 0.0};
  for (int i = 0; i < 6; ++i) {
    out.x += val[i] * u[vs.dof(0, nodes[i])];
    out.y += val[i] * u[vs.dof(1, nodes[i])];
  }
  return out;
}

std::array<std::array<double, 2>, 2> evaluate_velocity_gradient(
    const VelocitySpace& vs, const std::vector<double>& u, Index t,
    const std::array<double, 3>& l) {
  const P2Basis b = eval_velocity_basis(vs.mesh->triangle_coords(t), l);
  const auto& nodes = vs.element_nodes[t];
  std::array<std::array<double, 2>, 2> g{{{0.0, 0.0}, {0.0, 0.0}}};
  for (int i = 0; i < 6; ++i) {
    const double cx = u[vs.dof(0, nodes[i])];
    const double cy = u[vs.dof(1, nodes[i])];
    g[0][0] += cx * b.grad[i].x;
    g[0][1] += cx * b.grad[i].y;
    g[1][0] += cy * b.grad[i].x;
    g[1][1] += cy * b.grad[i].y;
  }
  return g;
}

}  // namespace fdflow
