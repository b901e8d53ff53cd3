// Command-line front end: single runs, epsilon x beta sweeps, the invariant
// check suite, and rate fitting over sweep CSVs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdflow/analysis.hpp"
#include "fdflow/assembly.hpp"
#include "fdflow/config.hpp"
#include "fdflow/fespace.hpp"
#include "fdflow/geometry.hpp"
#include "fdflow/manufactured.hpp"
#include "fdflow/mesh.hpp"
#include "fdflow/svg.hpp"
#include "fdflow/sweep.hpp"
#include "fdflow/timeloop.hpp"

namespace {

using namespace fdflow;

std::vector<double> parse_real_list(const std::string& text,
                                    const std::string& flag) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const char* begin = item.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      throw ConfigError(flag + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

struct CliOptions {
  std::string config_path;
  std::string epsilon_list;
  std::string beta_list;
  int n = 0;
  double dt = 0.0;
  std::string out_path;
  bool svg = false;
  std::string preset;
  double floor_factor = 3.0;
  int threads = 1;
  bool zero_forcing = false;
  std::string dump_mesh_path;
  bool inject_quadrature_fault = false;
  std::string rates_csv;
  // Which flags were given explicitly (config < preset < flags).
  bool has_n = false, has_dt = false, has_eps = false, has_beta = false;
};

RunConfig build_base_config(const CliOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) cfg = parse_config_file(opt.config_path);
  if (!opt.preset.empty()) {
    if (opt.preset != "paper")
      throw ConfigError("unknown preset '" + opt.preset + "' (try: paper)");
    cfg.n = 160;
    cfg.dt = 0.025;
  }
  if (opt.has_n) cfg.n = opt.n;
  if (opt.has_dt) cfg.dt = opt.dt;
  cfg.zero_forcing = opt.zero_forcing;
  return cfg;
}

int cmd_run(const CliOptions& opt) {
  RunConfig cfg = build_base_config(opt);
  if (opt.has_eps) {
    const auto eps = parse_real_list(opt.epsilon_list, "--epsilon");
    if (eps.size() != 1)
      throw ConfigError("run takes a single --epsilon value");
    cfg.epsilon = eps[0];
  }
  if (opt.has_beta) {
    const auto betas = parse_real_list(opt.beta_list, "--beta");
    if (betas.size() != 1) throw ConfigError("run takes a single --beta value");
    cfg.beta = betas[0];
  }
  validate(cfg);

  if (!opt.dump_mesh_path.empty()) {
    const Mesh split = alfeld_split(build_uniform(cfg.n));
    std::ofstream out(opt.dump_mesh_path);
    if (!out) {
      std::cerr << "cannot open for writing: " << opt.dump_mesh_path << "\n";
      return 1;
    }
    dump(split, out);
    return 0;
  }

  const RunResult result = run(cfg);
  const SweepRecord rec = make_record(cfg, result);
  std::cout << kCsvHeader << "\n" << format_csv_row(rec) << "\n";
  if (!result.ok) {
    std::cerr << "solver failure: " << result.failure << "\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const CliOptions& opt) {
  RunConfig base = build_base_config(opt);
  validate(base);
  std::vector<double> epsilons = {1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  std::vector<double> betas = {0.0, 0.2, 0.4, 0.6};
  if (opt.has_eps) epsilons = parse_real_list(opt.epsilon_list, "--epsilon");
  if (opt.has_beta) betas = parse_real_list(opt.beta_list, "--beta");
  if (opt.out_path.empty()) throw ConfigError("sweep requires --out <csv path>");

  const auto rows = run_sweep(base, epsilons, betas, opt.threads);
  write_csv(opt.out_path, rows);
  std::cout << "wrote " << rows.size() << " rows to " << opt.out_path << "\n";
  if (opt.svg) {
    std::string stem = opt.out_path;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
      stem.resize(stem.size() - 4);
    for (const auto& path : write_svg_plots(stem, rows))
      std::cout << "wrote " << path << "\n";
  }
  int failures = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++failures;
  if (failures > 0)
    std::cout << failures << " of " << rows.size()
              << " runs reported solver failure (recorded in CSV)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// check: invariant suites with per-check timing.

struct CheckRunner {
  int passed = 0;
  int failed = 0;

  void operator()(const std::string& name, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string what;
    try {
      body();
    } catch (const std::exception& e) {
      what = e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    if (what.empty()) {
      ++passed;
      std::printf("PASS  %-44s %9.2f ms\n", name.c_str(), ms);
    } else {
      ++failed;
      std::printf("FAIL  %-44s %9.2f ms\n      %s\n", name.c_str(), ms,
                  what.c_str());
    }
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

Vec2 fd_forcing(double t, Vec2 x, double mu) {
  const double h1 = 1e-6;  // first derivatives, 2nd order
  const double h2 = 1e-3;  // Laplacian, 4th-order stencil
  const Vec2 ex{1.0, 0.0}, ey{0.0, 1.0};
  const Vec2 ut = (1.0 / (2.0 * h1)) *
                  (exact_velocity(t + h1, x) - exact_velocity(t - h1, x));
  const Vec2 ux = (1.0 / (2.0 * h1)) * (exact_velocity(t, x + h1 * ex) -
                                        exact_velocity(t, x - h1 * ex));
  const Vec2 uy = (1.0 / (2.0 * h1)) * (exact_velocity(t, x + h1 * ey) -
                                        exact_velocity(t, x - h1 * ey));
  const Vec2 u = exact_velocity(t, x);
  const Vec2 conv = u.x * ux + u.y * uy;
  auto d2 = [&](Vec2 dir) {
    return (1.0 / (12.0 * h2 * h2)) *
           (-1.0 * exact_velocity(t, x + (2.0 * h2) * dir) +
            16.0 * exact_velocity(t, x + h2 * dir) - 30.0 * u +
            16.0 * exact_velocity(t, x - h2 * dir) -
            1.0 * exact_velocity(t, x - (2.0 * h2) * dir));
  };
  const Vec2 lap = d2(ex) + d2(ey);
  const Vec2 gradp{(exact_pressure(x + h1 * ex) - exact_pressure(x - h1 * ex)) /
                       (2.0 * h1),
                   (exact_pressure(x + h1 * ey) - exact_pressure(x - h1 * ey)) /
                       (2.0 * h1)};
  return ut + conv - mu * lap + gradp;
}

int cmd_check(const CliOptions& opt) {
  CheckRunner check;

  check("rate exponent unit values", [] {
    require(std::abs(rate_exponent(0.0, 0.0) - 1.0) < 1e-12, "A(0,0) != 1");
    require(std::abs(rate_exponent(0.0, 0.5) - 2.0) < 1e-12, "A(0,0.5) != 2");
    for (int i = 1; i <= 9; ++i) {
      const double beta = 0.1 * i;
      require(std::abs(rate_exponent(0.0, beta) - 1.0 / (1.0 - beta)) < 1e-12,
              "A(0,beta) != 1/(1-beta)");
    }
    double prev = rate_exponent(0.0, 0.0);
    for (int i = 1; i <= 19; ++i) {
      const double cur = rate_exponent(0.0, 0.05 * i);
      require(cur > prev, "A(0,beta) not increasing");
      prev = cur;
    }
  });

  check("damping monotonicity, 1e5 samples", [] {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> mag(0.0, 10.0);
    std::uniform_real_distribution<double> bdist(0.0, 0.999);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double v = damping_monotone(mag(rng), mag(rng), bdist(rng));
      worst = std::min(worst, v);
    }
    require(worst >= -1e-15,
            "monotonicity violated: min = " + std::to_string(worst));
  });

  check("manufactured solution is divergence free", [] {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> time(0.0, 1.0);
    const double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
      const double t = time(rng);
      const Vec2 x{coord(rng), coord(rng)};
      const double div =
          (exact_velocity(t, {x.x + h, x.y}).x -
           exact_velocity(t, {x.x - h, x.y}).x +
           exact_velocity(t, {x.x, x.y + h}).y -
           exact_velocity(t, {x.x, x.y - h}).y) /
          (2.0 * h);
      require(std::abs(div) <= 1e-6, "divergence residual > 1e-6");
    }
  });

  check("manufactured solution vanishes on the interface", [] {
    const double r = std::sqrt(0.5);
    for (int i = 0; i < 100; ++i) {
      const double th = 2.0 * 3.14159265358979323846 * i / 100.0;
      for (double t : {0.1, 0.37, 0.5, 0.93}) {
        const Vec2 u = exact_velocity(t, {r * std::cos(th), r * std::sin(th)});
        require(std::sqrt(dot(u, u)) <= 1e-12, "nonzero interface trace");
      }
    }
  });

  check("forcing matches finite-difference residual", [] {
    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> time(0.05, 0.95);
    for (int i = 0; i < 100; ++i) {
      const double t = time(rng), mu = (i % 2) ? 1.0 : 0.3;
      const Vec2 x{coord(rng), coord(rng)};
      const Vec2 f = forcing(t, x, mu);
      const Vec2 g = fd_forcing(t, x, mu);
      const Vec2 d = f - g;
      require(std::sqrt(dot(d, d)) <= 1e-5, "forcing residual > 1e-5");
    }
  });

  // Geometry checks share one n = 20 build; the fault hook perturbs a cut
  // weight so the partition test trips.
  Mesh split = alfeld_split(build_uniform(20));
  Geometry geom = build_geometry(split, 5, 4);
  if (opt.inject_quadrature_fault && geom.n_cut() > 0)
    geom.omega_rules[0].weights[0] += 1e-6;

  check("cut quadrature partitions every element", [&] {
    for (Index e = 0; e < split.n_triangles(); ++e) {
      if (geom.cls[e] != ElementClass::Cut) continue;
      const auto& om = geom.omega_rules[geom.cut_index[e]];
      const auto& d1 = geom.d1_rules[geom.cut_index[e]];
      double sum = 0.0;
      for (double w : om.weights) sum += w;
      for (double w : d1.weights) sum += w;
      const double area = signed_area(split.triangle_coords(e));
      require(std::abs(sum - area) <= 1e-12 * std::max(1.0, area),
              "partition defect on element " + std::to_string(e));
    }
  });

  check("quadrature areas match the disk and its complement", [&] {
    const double pi = 3.14159265358979323846;
    const double a_omega = total_area(geom, Side::Omega);
    const double a_d1 = total_area(geom, Side::D1);
    require(std::abs(a_omega - pi / 2.0) <= 1e-4, "area(Omega) off by > 1e-4");
    require(std::abs(a_d1 - (4.0 - pi / 2.0)) <= 1e-4,
            "area(D1) off by > 1e-4");
  });

  // Tiny-mesh space and assembly invariants.
  Mesh tiny = alfeld_split(build_uniform(1));
  auto [vs, ps] = build_spaces(tiny);
  Geometry tiny_geom = build_geometry(tiny, 5, 4);

  check("velocity basis: partition of unity", [&] {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (Index e = 0; e < tiny.n_triangles(); ++e)
      for (int trial = 0; trial < 8; ++trial) {
        double a = u01(rng), b = u01(rng);
        if (a + b > 1.0) {
          a = 1.0 - a;
          b = 1.0 - b;
        }
        const auto basis =
            eval_velocity_basis(tiny.triangle_coords(e), {a, b, 1.0 - a - b});
        double sum = 0.0;
        for (double v : basis.val) sum += v;
        require(std::abs(sum - 1.0) <= 1e-12, "basis does not sum to 1");
      }
  });

  check("assembly invariants on the tiny mesh", [&] {
    const CsrMatrix mass = assemble_mass(vs);
    // Quadratic form with both components constant 1 integrates 2 over D.
    std::vector<double> ones(vs.n_dofs(), 1.0), tmp(vs.n_dofs());
    mass.matvec(ones.data(), tmp.data());
    double q = 0.0;
    for (size_t i = 0; i < tmp.size(); ++i) q += tmp[i] * ones[i];
    require(std::abs(q - 8.0) <= 1e-10, "mass form on constants != 2*|D|");

    const CsrMatrix visc = assemble_viscous(vs, 1.0, DirichletMode::None);
    visc.matvec(ones.data(), tmp.data());
    double worst = 0.0;
    for (double v : tmp) worst = std::max(worst, std::abs(v));
    require(worst <= 1e-10, "viscous operator not zero on constants");

    const CsrMatrix div_op = assemble_divergence(vs, ps);
    const auto rot = interpolate(vs, [](Vec2 x) { return Vec2{x.y, -x.x}; });
    std::vector<double> bres(ps.n_dofs());
    div_op.matvec(rot.data(), bres.data());
    worst = 0.0;
    for (double v : bres) worst = std::max(worst, std::abs(v));
    require(worst <= 1e-12, "divergence of a rigid rotation not zero");
    const auto shear = interpolate(vs, [](Vec2 x) { return Vec2{x.x, 0.0}; });
    div_op.matvec(shear.data(), bres.data());
    worst = 0.0;
    for (double v : bres) worst = std::max(worst, std::abs(v));
    require(worst > 1e-3, "divergence operator vanished on x*e1");

    const CsrMatrix pen = assemble_penalty_mass(vs, tiny_geom);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pm(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> v(vs.n_dofs());
      for (auto& x : v) x = pm(rng);
      std::vector<double> mv(vs.n_dofs()), pv(vs.n_dofs());
      mass.matvec(v.data(), mv.data());
      pen.matvec(v.data(), pv.data());
      double qm = 0.0, qp = 0.0;
      for (size_t i = 0; i < v.size(); ++i) {
        qm += mv[i] * v[i];
        qp += pv[i] * v[i];
      }
      require(qp >= -1e-12, "penalty form negative");
      require(qp <= qm + 1e-10, "penalty form exceeds mass form");
    }
  });

  check("penalty coefficient reference values", [&] {
    std::vector<double> zero(vs.n_dofs(), 0.0);
    const double g0 =
        penalty_coefficient(zero, vs, tiny_geom, 1e-3, 0.0, 1e-9);
    require(std::abs(g0 - 999.999999) < 1e-3, "beta=0 coefficient off");
    const double g1 =
        penalty_coefficient(zero, vs, tiny_geom, 1e-3, 0.5, 1e-9);
    require(std::abs(g1 - 1e12) / 1e12 < 1e-9, "zero-state coefficient off");
  });

  std::printf("check: %d passed, %d failed\n", check.passed, check.failed);
  return check.failed == 0 ? 0 : 3;
}

int cmd_rates(const CliOptions& opt) {
  std::vector<SweepRecord> rows;
  try {
    rows = read_csv(opt.rates_csv);
  } catch (const std::exception& e) {
    std::cerr << "rates: " << e.what() << "\n";
    return 1;
  }

  std::vector<double> betas;
  for (const auto& r : rows)
    if (std::find(betas.begin(), betas.end(), r.beta) == betas.end())
      betas.push_back(r.beta);

  for (double beta : betas) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
      if (r.beta == beta && r.status == "ok")
        pts.emplace_back(r.epsilon, r.err_l2h1);
    const RateFit fit = fit_rate(pts, opt.floor_factor);
    const double ref = rate_exponent(0.0, beta) / 2.0;
    if (fit.conclusive) {
      double lo = pts[fit.window.front()].first;
      double hi = lo;
      for (int i : fit.window) {
        lo = std::min(lo, pts[i].first);
        hi = std::max(hi, pts[i].first);
      }
      std::printf(
          "beta = %-4g slope = %.4f  window: %zu points, eps in [%g, %g]  "
          "reference A(0,beta)/2 = %g\n",
          beta, fit.slope, fit.window.size(), lo, hi, ref);
    } else {
      std::printf("beta = %-4g inconclusive (%s)  reference A(0,beta)/2 = %g\n",
                  beta, fit.note.c_str(), ref);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fictitious-domain incompressible flow benchmark driver"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* sub, bool with_lists) {
    sub->add_option("--config", opt.config_path, "key=value config file");
    sub->add_option("--n", opt.n, "mesh cells per side")
        ->check(CLI::PositiveNumber);
    sub->add_option("--dt", opt.dt, "time step")->check(CLI::PositiveNumber);
    sub->add_option("--preset", opt.preset,
                    "named preset; 'paper' sets n=160, dt=0.025 (long run: "
                    "minutes to hours)");
    if (with_lists) {
      sub->add_option("--epsilon", opt.epsilon_list,
                      "penalty epsilon (comma list)");
      sub->add_option("--beta", opt.beta_list, "penalty beta (comma list)");
    }
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one simulation, print CSV");
  add_common(run_cmd, true);
  run_cmd->add_flag("--zero-forcing", opt.zero_forcing,
                    "drop the forcing term (debug)")
      ->group("");
  run_cmd->add_option("--dump-mesh", opt.dump_mesh_path,
                      "write the split mesh as text and exit (debug)")
      ->group("");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run an epsilon x beta sweep, write CSV");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--out", opt.out_path, "output CSV path");
  sweep_cmd->add_flag("--svg", opt.svg, "also write log-log SVG charts");
  sweep_cmd->add_option("--threads", opt.threads, "concurrent sweep points")
      ->check(CLI::PositiveNumber);

  CLI::App* check_cmd =
      app.add_subcommand("check", "run the invariant suite");
  check_cmd
      ->add_flag("--inject-quadrature-fault", opt.inject_quadrature_fault,
                 "perturb one cut weight (test hook)")
      ->group("");

  CLI::App* rates_cmd =
      app.add_subcommand("rates", "fit convergence rates from a sweep CSV");
  rates_cmd->add_option("csv", opt.rates_csv, "sweep CSV path")->required();
  rates_cmd->add_option("--floor-factor", opt.floor_factor,
                        "error-floor cutoff as a multiple of the minimum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  opt.has_n = run_cmd->count("--n") + sweep_cmd->count("--n") > 0;
  opt.has_dt = run_cmd->count("--dt") + sweep_cmd->count("--dt") > 0;
  opt.has_eps = run_cmd->count("--epsilon") + sweep_cmd->count("--epsilon") > 0;
  opt.has_beta = run_cmd->count("--beta") + sweep_cmd->count("--beta") > 0;

  try {
    if (run_cmd->parsed()) return cmd_run(opt);
    if (sweep_cmd->parsed()) return cmd_sweep(opt);
    if (check_cmd->parsed()) return cmd_check(opt);
    if (rates_cmd->parsed()) return cmd_rates(opt);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
