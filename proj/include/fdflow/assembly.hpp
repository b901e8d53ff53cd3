#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fdflow/fespace.hpp"
#include "fdflow/geometry.hpp"
#include "fdflow/sparse.hpp"

namespace fdflow {

enum class DirichletMode { None, Identity };

/// Shared sparsity of all scalar P2 operators (mass, viscous, convection,
/// penalty mass act identically on both velocity components, so each is
/// stored once as an n_scalar x n_scalar value array on this pattern).
struct ScalarPattern {
  CsrMatrix pat;  // values unused, kept zero
  std::vector<std::array<std::int32_t, 36>> positions;  // per element, row-major 6x6
};

ScalarPattern build_scalar_pattern(const VelocitySpace& vs);

/// Scalar-block assemblers; vals is resized to the pattern nnz and overwritten.
void assemble_mass_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                        std::vector<double>& vals);
void assemble_viscous_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                           double mu, std::vector<double>& vals);
void assemble_convection_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                              const std::vector<double>& w,
                              std::vector<double>& vals);
void assemble_penalty_mass_vals(const VelocitySpace& vs, const ScalarPattern& sp,
                                const Geometry& geom, std::vector<double>& vals);

/// Zero boundary-node rows and columns on a scalar value array; set boundary
/// diagonals to `diag`.
void apply_dirichlet_scalar(const VelocitySpace& vs, const ScalarPattern& sp,
                            std::vector<double>& vals, double diag);

/// Spec-level matrices on the full vector space (two identical diagonal
/// component blocks).
CsrMatrix assemble_mass(const VelocitySpace& vs);
CsrMatrix assemble_viscous(const VelocitySpace& vs, double mu,
                           DirichletMode mode = DirichletMode::Identity);
CsrMatrix assemble_convection(const VelocitySpace& vs,
                              const std::vector<double>& w);
CsrMatrix assemble_penalty_mass(const VelocitySpace& vs, const Geometry& geom);

/// B with entries b(psi_i, phi_j) = -int_D psi_i div(phi_j); rows are
/// pressure dofs, columns velocity dofs.
CsrMatrix assemble_divergence(const VelocitySpace& vs, const PressureSpace& ps);

/// Load vector over Omega only: entry = int_Omega f(t,.) . phi_i via the
/// geometry's Omega-side rules (f extended by zero on D1).
std::vector<double> assemble_rhs(const VelocitySpace& vs, const Geometry& geom,
                                 const std::function<Vec2(double, Vec2)>& f,
                                 double t);

/// L2 norm of a velocity coefficient vector over D1 (cut quadrature).
double l2_norm_d1(const VelocitySpace& vs, const Geometry& geom,
                  const std::vector<double>& u);

/// 1 / (eps * (||u||_{L2(D1)}^beta + delta_reg)).
double penalty_coefficient(const std::vector<double>& u,
                           const VelocitySpace& vs, const Geometry& geom,
                           double eps, double beta, double delta_reg);

/// e_i = int_D psi_i (the mean-zero constraint row).
std::vector<double> pressure_mean_vector(const PressureSpace& ps);

}  // namespace fdflow
