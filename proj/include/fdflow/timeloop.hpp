#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fdflow/geometry.hpp"
#include "fdflow/linsolve.hpp"
#include "fdflow/mesh.hpp"

namespace fdflow {

struct RunConfig {
  int n = 20;              // mesh cells per side of D
  double dt = 0.05;
  double T = 1.0;
  double epsilon = 1e-3;
  double beta = 0.0;
  double mu = 1.0;
  double delta_reg = 1e-9;
  int cut_depth = 5;
  double solver_tol = 1e-10;
  bool zero_forcing = false;  // debug: drop the manufactured forcing

  int n_steps() const;
};

/// Throws std::invalid_argument on any violated invariant.
void validate(const RunConfig& c);

struct FieldState {
  std::vector<double> curr;      // u^n
  std::vector<double> prev;      // u^{n-1}
  std::vector<double> prevprev;  // u^{n-2}
  std::vector<double> pressure;  // p^n
  double t = 0.0;
  int step = 0;
};

/// One configured run: mesh, spaces, geometry caches, time-invariant blocks,
/// and the BDF time stepping. Members are exposed for tests and diagnostics;
/// treat them as read-only outside the stepping methods.
class Simulation {
 public:
  explicit Simulation(const RunConfig& config);

  // SaddleSystem and the spaces hold references into this object.
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// u^0 = interpolant of the exact velocity at t = 0 (the zero field);
  /// history seeded with u^0.
  void initialize();

  /// Advance one step: backward Euler from step 0, BDF2 afterwards, with
  /// convection and penalty denominator frozen/extrapolated respectively.
  /// Returns false on solver failure (state not advanced).
  bool step();

  RunConfig cfg;
  Mesh base_mesh;
  Mesh mesh;  // Alfeld split of base_mesh
  VelocitySpace vspace;
  PressureSpace pspace;
  ScalarPattern spattern;
  Geometry geom_form;  // base rule degree 4: penalty mass, D1 norms
  Geometry geom_err;   // base rule degree 6: load vector, error norms
  std::unique_ptr<SaddleSystem> system;
  FieldState state;

  // Diagnostics of the most recent step.
  SaddleSolveReport last_report;
  double last_gamma = 0.0;
  std::string last_error;

 private:
  std::vector<double> mass_vals_, visc_vals_, penalty_vals_;
  CsrMatrix mass_scalar_;  // scalar mass matrix for history terms and norms
  std::vector<double> conv_vals_, combined_, w_, rhs_;

  bool advance(double lhs_scale, const std::vector<double>& rhs_history,
               const std::vector<double>& w);

 public:
  /// ||u||_{L2(D)} through the scalar mass matrix.
  double l2_norm_d(const std::vector<double>& u) const;
};

struct RunResult {
  double err_l2_final = 0.0;
  double err_l2h1 = 0.0;
  double max_div = 0.0;
  double max_energy = 0.0;
  double max_l2_d = 0.0;
  double cond_estimate = 0.0;
  double wall_seconds = 0.0;
  double h = 0.0;
  int steps_completed = 0;
  bool ok = false;
  std::string failure;
};

RunResult run(const RunConfig& config);

}  // namespace fdflow
