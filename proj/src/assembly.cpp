#include "fdflow/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdflow/quadrature.hpp"

namespace fdflow {

namespace {

constexpr int kFormDegree = 4;        // mass, viscous, divergence, penalty
constexpr int kConvectionDegree = 5;  // P2 * grad(P2) * P2 products

// Per-element precomputed basis data for a fixed reference rule.
struct ElementQuad {
  const TriRule& rule;
  double area;
  std::vector<P2Basis> basis;  // one per quadrature point

  ElementQuad(const Triangle& tri, const TriRule& r) : rule(r) {
    area = signed_area(tri);
    basis.reserve(r.points.size());
    for (const auto& l : r.points) basis.push_back(eval_velocity_basis(tri, l));
  }
};

template <class Kernel>
void assemble_scalar(const VelocitySpace& vs, const ScalarPattern& sp,
                     std::vector<double>& vals, int degree, Kernel&& element_kernel) {
  vals.assign(sp.pat.vals.size(), 0.0);
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(degree);
  double local[36];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    std::fill(local, local + 36, 0.0);
    ElementQuad eq(mesh.triangle_coords(t), rule);
    element_kernel(t, eq, local);
    const auto& pos = sp.positions[t];
    for (int k = 0; k < 36; ++k) vals[pos[k]] += local[k];
  }
}

CsrMatrix expand_to_vector(const VelocitySpace& vs, const ScalarPattern& sp,
                           const std::vector<double>& scalar_vals) {
  const Index ns = vs.n_scalar;
  CsrMatrix m;
  m.rows = m.cols = 2 * ns;
  m.row_ptr.resize(static_cast<size_t>(m.rows) + 1);
  const std::int32_t nnz_s = sp.pat.nnz();
  m.col_idx.resize(2 * static_cast<size_t>(nnz_s));
  m.vals.resize(2 * static_cast<size_t>(nnz_s));
  for (int comp = 0; comp < 2; ++comp) {
    const std::int32_t off = comp * nnz_s;
    for (Index i = 0; i < ns; ++i)
      m.row_ptr[comp * ns + i] = off + sp.pat.row_ptr[i];
    for (std::int32_t k = 0; k < nnz_s; ++k) {
      m.col_idx[off + k] = sp.pat.col_idx[k] + comp * ns;
      m.vals[off + k] = scalar_vals[k];
    }
  }
  m.row_ptr[2 * ns] = 2 * nnz_s;
  return m;
}

}  // namespace

ScalarPattern build_scalar_pattern(const VelocitySpace& vs) {
  const Mesh& mesh = *vs.mesh;
  TripletBuffer tb;
  tb.reserve(static_cast<size_t>(mesh.n_triangles()) * 36);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& nodes = vs.element_nodes[t];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) tb.add(nodes[i], nodes[j], 0.0);
  }

  ScalarPattern sp;
  sp.pat = tb.to_csr(vs.n_scalar, vs.n_scalar);
  sp.positions.resize(mesh.n_triangles());
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& nodes = vs.element_nodes[t];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        sp.positions[t][6 * i + j] = sp.pat.find(nodes[i], nodes[j]);
  }
  return sp;
}

void assemble_mass_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                        std::vector<double>& vals) {
  assemble_scalar(vs, sp, vals, kFormDegree,
                  [](Index, const ElementQuad& eq, double* local) {
    for (size_t q = 0; q < eq.rule.points.size(); ++q) {
      const double w = eq.rule.weights[q] * eq.area;
      const auto& v = eq.basis[q].val;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local[6 * i + j] += w * v[i] * v[j];
    }
  });
}

void assemble_viscous_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                           double mu, std::vector<double>& vals) {
  assemble_scalar(vs, sp, vals, kFormDegree,
                  [mu](Index, const ElementQuad& eq, double* local) {
    for (size_t q = 0; q < eq.rule.points.size(); ++q) {
      const double w = mu * eq.rule.weights[q] * eq.area;
      const auto& g = eq.basis[q].grad;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local[6 * i + j] += w * dot(g[i], g[j]);
    }
  });
}

void assemble_convection_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                              const std::vector<double>& w,
                              std::vector<double>& vals) {
  assemble_scalar(vs, sp, vals, kConvectionDegree,
                  [&](Index t, const ElementQuad& eq, double* local) {
    const auto& nodes = vs.element_nodes[t];
    for (size_t q = 0; q < eq.rule.points.size(); ++q) {
      const double wq = eq.rule.weights[q] * eq.area;
      const auto& v = eq.basis[q].val;
      const auto& g = eq.basis[q].grad;
      Vec2 adv{0.0, 0.0};
      for (int i = 0; i < 6; ++i) {
        adv.x += v[i] * w[vs.dof(0, nodes[i])];
        adv.y += v[i] * w[vs.dof(1, nodes[i])];
      }
      for (int j = 0; j < 6; ++j) {
        const double conv_j = dot(adv, g[j]);
        for (int i = 0; i < 6; ++i) local[6 * i + j] += wq * conv_j * v[i];
      }
    }
  });
}

void assemble_penalty_mass_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                                const Geometry& geom, std::vector<double>& vals) {
  vals.assign(sp.pat.vals.size(), 0.0);
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(geom.base_order);
  double local[36];
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    if (geom.cls[t] == ElementClass::Inside) continue;
    std::fill(local, local + 36, 0.0);
    if (geom.cls[t] == ElementClass::Outside) {
      const double area = signed_area(mesh.triangle_coords(t));
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const double w = rule.weights[q] * area;
        const auto v = p2_values(rule.points[q]);
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) local[6 * i + j] += w * v[i] * v[j];
      }
    } else {
      const CutQuadrature& cq = geom.d1_rules[geom.cut_index[t]];
      for (size_t q = 0; q < cq.size(); ++q) {
        const double w = cq.weights[q];
        const auto v = p2_values(cq.bary[q]);
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) local[6 * i + j] += w * v[i] * v[j];
      }
    }
    const auto& pos = sp.positions[t];
    for (int k = 0; k < 36; ++k) vals[pos[k]] += local[k];
  }
}

void apply_dirichlet_scalar(const VelocitySpace& vs, const ScalarPattern& sp,
                            std::vector<double>& vals, double diag) {
  const CsrMatrix& p = sp.pat;
  for (Index i = 0; i < p.rows; ++i) {
    const bool bi = vs.node_on_boundary[i];
    for (std::int32_t k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) {
      const Index j = p.col_idx[k];
      if (!bi && !vs.node_on_boundary[j]) continue;
      vals[k] = (i == j) ? diag : 0.0;
    }
  }
}

CsrMatrix assemble_mass(const VelocitySpace& vs) {
  ScalarPattern sp = build_scalar_pattern(vs);
  std::vector<double> v;
  assemble_mass_vals(vs, sp, v);
  return expand_to_vector(vs, sp, v);
}

CsrMatrix assemble_viscous(const VelocitySpace& vs, double mu,
                           DirichletMode mode) {
  if (mu <= 0.0) throw std::invalid_argument("assemble_viscous: mu must be > 0");
  ScalarPattern sp = build_scalar_pattern(vs);
  std::vector<double> v;
  assemble_viscous_vals(vs, sp, mu, v);
  if (mode == DirichletMode::Identity) apply_dirichlet_scalar(vs, sp, v, 1.0);
  return expand_to_vector(vs, sp, v);
}

CsrMatrix assemble_convection(const VelocitySpace& vs,
                              const std::vector<double>& w) {
  ScalarPattern sp = build_scalar_pattern(vs);
  std::vector<double> v;
  assemble_convection_vals(vs, sp, w, v);
  return expand_to_vector(vs, sp, v);
}

CsrMatrix assemble_penalty_mass(const VelocitySpace& vs, const Geometry& geom) {
  ScalarPattern sp = build_scalar_pattern(vs);
  std::vector<double> v;
  assemble_penalty_mass_vals(vs, sp, geom, v);
  return expand_to_vector(vs, sp, v);
}

CsrMatrix assemble_divergence(const VelocitySpace& vs, const PressureSpace& ps) {
  if (vs.mesh != ps.mesh)
    throw std::invalid_argument("assemble_divergence: mismatched meshes");
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(kFormDegree);
  TripletBuffer tb;
  tb.reserve(static_cast<size_t>(mesh.n_triangles()) * 3 * 12);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    ElementQuad eq(mesh.triangle_coords(t), rule);
    const auto& nodes = vs.element_nodes[t];
    double local[3][12] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * eq.area;
      const auto& l = rule.points[q];
      const auto& g = eq.basis[q].grad;
      for (int i = 0; i < 3; ++i) {
        const double pw = -w * l[i];
        for (int j = 0; j < 6; ++j) {
          local[i][j] += pw * g[j].x;
          local[i][6 + j] += pw * g[j].y;
        }
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 6; ++j) {
        tb.add(ps.dof(t, i), vs.dof(0, nodes[j]), local[i][j]);
        tb.add(ps.dof(t, i), vs.dof(1, nodes[j]), local[i][6 + j]);
      }
  }
  return tb.to_csr(ps.n_dofs(), vs.n_dofs());
}

std::vector<double> assemble_rhs(const VelocitySpace& vs, const Geometry& geom,
                                 const std::function<Vec2(double, Vec2)>& f,
                                 double t) {
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(geom.base_order);
  std::vector<double> rhs(static_cast<size_t>(vs.n_dofs()), 0.0);
  for (Index e = 0; e < mesh.n_triangles(); ++e) {
    if (geom.cls[e] == ElementClass::Outside) continue;
    const auto& nodes = vs.element_nodes[e];
    if (geom.cls[e] == ElementClass::Inside) {
      const Triangle tri = mesh.triangle_coords(e);
      const double area = signed_area(tri);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        const Vec2 x = l[0] * tri[0] + l[1] * tri[1] + l[2] * tri[2];
        const Vec2 fx = f(t, x);
        const double w = rule.weights[q] * area;
        const auto v = p2_values(l);
        for (int i = 0; i < 6; ++i) {
          rhs[vs.dof(0, nodes[i])] += w * v[i] * fx.x;
          rhs[vs.dof(1, nodes[i])] += w * v[i] * fx.y;
        }
      }
    } else {
      const CutQuadrature& cq = geom.omega_rules[geom.cut_index[e]];
      for (size_t q = 0; q < cq.size(); ++q) {
        const Vec2 fx = f(t, cq.points[q]);
        const double w = cq.weights[q];
        const auto v = p2_values(cq.bary[q]);
        for (int i = 0; i < 6; ++i) {
          rhs[vs.dof(0, nodes[i])] += w * v[i] * fx.x;
          rhs[vs.dof(1, nodes[i])] += w * v[i] * fx.y;
        }
      }
    }
  }
  return rhs;
}

double l2_norm_d1(const VelocitySpace& vs, const Geometry& geom,
                  const std::vector<double>& u) {
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(geom.base_order);
  double sum = 0.0;
  for (Index e = 0; e < mesh.n_triangles(); ++e) {
    if (geom.cls[e] == ElementClass::Inside) continue;
    if (geom.cls[e] == ElementClass::Outside) {
      const Triangle tri = mesh.triangle_coords(e);
      const double area = signed_area(tri);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 v = evaluate_velocity(vs, u, e, rule.points[q]);
        sum += rule.weights[q] * area * dot(v, v);
      }
    } else {
      const CutQuadrature& cq = geom.d1_rules[geom.cut_index[e]];
      for (size_t q = 0; q < cq.size(); ++q) {
        const Vec2 v = evaluate_velocity(vs, u, e, cq.bary[q]);
        sum += cq.weights[q] * dot(v, v);
      }
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

double penalty_coefficient(const std::vector<double>& u,
                           const VelocitySpace& vs, const Geometry& geom,
                           double eps, double beta, double delta_reg) {
  if (eps <= 0.0) throw std::invalid_argument("penalty_coefficient: eps must be > 0");
  if (beta < 0.0 || beta >= 1.0)
    throw std::invalid_argument("penalty_coefficient: beta must be in [0, 1)");
  if (delta_reg <= 0.0)
    throw std::invalid_argument("penalty_coefficient: delta_reg must be > 0");
  const double norm = l2_norm_d1(vs, geom, u);
  // pow(0, 0) = 1 recovers the classical beta = 0 damping for the zero state.
  return 1.0 / (eps * (std::pow(norm, beta) + delta_reg));
}

std::vector<double> pressure_mean_vector(const PressureSpace& ps) {
  const Mesh& mesh = *ps.mesh;
  std::vector<double> e(static_cast<size_t>(ps.n_dofs()), 0.0);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const double third = signed_area(mesh.triangle_coords(t)) / 3.0;
    for (int i = 0; i < 3; ++i) e[ps.dof(t, i)] = third;
  }
  return e;
}

}  // namespace fdflow
