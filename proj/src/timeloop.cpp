#include "fdflow/timeloop.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fdflow/analysis.hpp"
#include "fdflow/kernels.hpp"
#include "fdflow/manufactured.hpp"

namespace fdflow {

int RunConfig::n_steps() const { return static_cast<int>(std::llround(T / dt)); }

void validate(const RunConfig& c) {
  if (c.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (!(c.dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
  if (!(c.T > 0.0)) throw std::invalid_argument("config: T must be > 0");
  const double ratio = c.T / c.dt;
  if (std::abs(ratio - std::llround(ratio)) > 1e-12 * std::max(1.0, ratio))
    throw std::invalid_argument("config: T/dt must be integral (within 1e-12)");
  if (!(c.epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
  if (c.beta < 0.0 || c.beta >= 1.0)
    throw std::invalid_argument("config: beta must satisfy 0 <= beta < 1");
  if (!(c.mu > 0.0)) throw std::invalid_argument("config: mu must be > 0");
  if (!(c.delta_reg > 0.0))
    throw std::invalid_argument("config: delta_reg must be > 0");
  if (c.cut_depth < 0 || c.cut_depth > 12)
    throw std::invalid_argument("config: cut_depth must be in [0, 12]");
  if (!(c.solver_tol > 0.0) || c.solver_tol > 1e-6)
    throw std::invalid_argument("config: solver_tol must be in (0, 1e-6]");
}

Simulation::Simulation(const RunConfig& config) : cfg(config) {
  validate(cfg);
  base_mesh = build_uniform(cfg.n);
  mesh = alfeld_split(base_mesh);
  auto spaces = build_spaces(mesh);
  vspace = std::move(spaces.first);
  pspace = spaces.second;
  spattern = build_scalar_pattern(vspace);
  geom_form = build_geometry(mesh, cfg.cut_depth, 4);
  geom_err = build_geometry(mesh, cfg.cut_depth, 6);
  system = std::make_unique<SaddleSystem>(vspace, pspace, spattern);

  assemble_mass_vals(vspace, spattern, mass_vals_);
  assemble_viscous_vals(vspace, spattern, cfg.mu, visc_vals_);
  assemble_penalty_mass_vals(vspace, spattern, geom_form, penalty_vals_);
  mass_scalar_ = spattern.pat;
  mass_scalar_.vals = mass_vals_;
}

void Simulation::initialize() {
  std::vector<double> u0 =
      interpolate(vspace, [](Vec2 p) { return exact_velocity(0.0, p); });
  state.curr = u0;
  state.prev = u0;
  state.prevprev = u0;
  state.pressure.assign(static_cast<size_t>(pspace.n_dofs()), 0.0);
  state.t = 0.0;
  state.step = 0;
}

double Simulation::l2_norm_d(const std::vector<double>& u) const {
  const size_t ns = static_cast<size_t>(vspace.n_scalar);
  std::vector<double> tmp(ns);
  double sum = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    const double* uc = u.data() + comp * ns;
    mass_scalar_.matvec(uc, tmp.data());
    sum += kernels::dot(uc, tmp.data(), ns);
  }
  return std::sqrt(std::max(sum, 0.0));
}

bool Simulation::advance(double lhs_scale, const std::vector<double>& rhs_history,
                         const std::vector<double>& w) {
  const double t_new = state.t + cfg.dt;

  last_gamma = penalty_coefficient(w, vspace, geom_form, cfg.epsilon, cfg.beta,
                                   cfg.delta_reg);
  assemble_convection_vals(vspace, spattern, w, conv_vals_);

  combined_ = visc_vals_;
  kernels::axpy(lhs_scale, mass_vals_.data(), combined_.data(), combined_.size());
  kernels::axpy(1.0, conv_vals_.data(), combined_.data(), combined_.size());
  kernels::axpy(last_gamma, penalty_vals_.data(), combined_.data(),
                combined_.size());

  if (!system->set_velocity_block(combined_)) {
    last_error = "factorization failed";
    last_report = SaddleSolveReport{};
    return false;
  }

  if (cfg.zero_forcing) {
    rhs_.assign(static_cast<size_t>(vspace.n_dofs()), 0.0);
  } else {
    const double mu = cfg.mu;
    rhs_ = assemble_rhs(
        vspace, geom_err,
        [mu](double t, Vec2 p) { return forcing(t, p, mu); }, t_new);
  }
  kernels::axpy(1.0, rhs_history.data(), rhs_.data(), rhs_.size());

  SaddleSystem::Result res = system->solve(rhs_, cfg.solver_tol);
  last_report = res.report;
  if (!res.ok) {
    last_error = res.report.factorization_ok
                     ? "iterative refinement did not reach tolerance"
                     : "factorization failed";
    return false;
  }

  last_error.clear();
  state.prevprev = std::move(state.prev);
  state.prev = std::move(state.curr);
  state.curr = std::move(res.u);
  state.pressure = std::move(res.p);
  state.t = t_new;
  ++state.step;
  return true;
}

bool Simulation::step() {
  const size_t ns = static_cast<size_t>(vspace.n_scalar);
  const size_t nu = static_cast<size_t>(vspace.n_dofs());
  std::vector<double> hist(nu, 0.0);
  std::vector<double> tmp(ns);

  if (state.step == 0) {
    // Backward Euler startup: (u^1 - u^0)/dt, convection and penalty at u^0.
    const double a0 = 1.0 / cfg.dt;
    for (int comp = 0; comp < 2; ++comp) {
      mass_scalar_.matvec(state.curr.data() + comp * ns, tmp.data());
      kernels::axpy(a0, tmp.data(), hist.data() + comp * ns, ns);
    }
    return advance(a0, hist, state.curr);
  }

  // BDF2: (3u^{n+1} - 4u^n + u^{n-1})/(2dt); extrapolation w = 2u^n - u^{n-1}
  // drives both the convection field and the penalty denominator.
  w_.assign(nu, 0.0);
  for (size_t i = 0; i < nu; ++i) w_[i] = 2.0 * state.curr[i] - state.prev[i];
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<double> combo(ns);
    for (size_t i = 0; i < ns; ++i) {
      combo[i] = (4.0 * state.curr[comp * ns + i] - state.prev[comp * ns + i]) /
                 (2.0 * cfg.dt);
    }
    mass_scalar_.matvec(combo.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), hist.data() + comp * ns, ns);
  }
  return advance(3.0 / (2.0 * cfg.dt), hist, w_);
}

RunResult run(const RunConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult out;

  Simulation sim(config);
  out.h = sim.mesh.h;
  sim.initialize();

  const int n_steps = config.n_steps();
  double h1_accum = 0.0;
  for (int n = 1; n <= n_steps; ++n) {
    if (!sim.step()) {
      out.ok = false;
      out.failure = sim.last_error;
      out.cond_estimate = sim.last_report.factorization_ok
                              ? sim.system->condition_estimate()
                              : std::numeric_limits<double>::infinity();
      out.err_l2_final = std::numeric_limits<double>::quiet_NaN();
      out.err_l2h1 = std::sqrt(h1_accum);
      out.steps_completed = n - 1;
      const auto t_end = std::chrono::steady_clock::now();
      out.wall_seconds = std::chrono::duration<double>(t_end - t_start).count();
      return out;
    }
    const double div = div_norm(sim.vspace, sim.state.curr);
    out.max_div = std::max(out.max_div, div);
    const double eh1 =
        error_h1_omega(sim.vspace, sim.state.curr, sim.state.t, sim.geom_err);
    h1_accum += config.dt * eh1 * eh1;
    const double energy =
        energy_functional(sim.vspace, sim.state.curr, config.epsilon,
                          config.beta, config.mu, sim.geom_form);
    out.max_energy = std::max(out.max_energy, energy);
    out.max_l2_d = std::max(out.max_l2_d, sim.l2_norm_d(sim.state.curr));
  }

  out.err_l2h1 = std::sqrt(h1_accum);
  out.err_l2_final =
      error_l2_omega(sim.vspace, sim.state.curr, sim.state.t, sim.geom_err);
  out.cond_estimate = sim.system->condition_estimate();
  out.steps_completed = n_steps;
  out.ok = true;
  const auto t_end = std::chrono::steady_clock::now();
  out.wall_seconds = std::chrono::duration<double>(t_end - t_start).count();
  return out;
}

}  // namespace fdflow
