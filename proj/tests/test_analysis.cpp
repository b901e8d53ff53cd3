#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fdflow/analysis.hpp"
#include "fdflow/assembly.hpp"
#include "fdflow/manufactured.hpp"
#include "support/oracles.hpp"

using namespace fdflow;

TEST_CASE("rate exponent closed-form values") {
  CHECK(rate_exponent(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rate_exponent(0.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rate_exponent(0.0, 0.75) == doctest::Approx(4.0).epsilon(1e-14));
  for (int i = 0; i <= 9; ++i) {
    const double beta = 0.1 * i;
    CHECK(rate_exponent(0.0, beta) ==
          doctest::Approx(1.0 / (1.0 - beta)).epsilon(1e-13));
  }
  // General (k, beta) point checked against the formula itself at k = 1.
  CHECK(rate_exponent(1.0, 0.5) ==
        doctest::Approx(10.0 / (28.0 - 8.0 - 1.5)).epsilon(1e-13));
  // Monotone in beta for fixed k.
  for (double k : {0.0, 0.5, 1.0, 2.0}) {
    double prev = rate_exponent(k, 0.0);
    for (int i = 1; i <= 19; ++i) {
      const double cur = rate_exponent(k, 0.05 * i);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("rate exponent domain") {
  CHECK_THROWS_AS(rate_exponent(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(rate_exponent(0.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(rate_exponent(8.0 / 3.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(rate_exponent(-1.0, 0.0), std::domain_error);
}

TEST_CASE("fit recovers a clean square-root law") {
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k <= 6; ++k) {
    const double eps = std::pow(10.0, -k);
    pts.push_back({eps, std::sqrt(eps)});
  }
  const RateFit fit = fit_rate(pts, 3.0);
  REQUIRE(fit.conclusive);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  // Everything except the minimum qualifies for the window.
  CHECK(fit.window.size() == 6);

  // Scale invariance: multiplying all errors by a constant moves nothing.
  for (auto& p : pts) p.second *= 137.0;
  const RateFit fit2 = fit_rate(pts, 3.0);
  REQUIRE(fit2.conclusive);
  CHECK(fit2.slope == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fit window stops at the error floor") {
  // sqrt(eps) decay that saturates at 9e-3 from eps = 1e-4 on.
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k <= 6; ++k) {
    const double eps = std::pow(10.0, -k);
    pts.push_back({eps, std::max(std::sqrt(eps), 9e-3)});
  }
  const RateFit fit = fit_rate(pts, 3.0);
  REQUIRE(fit.conclusive);
  CHECK(fit.window.size() == 4);  // eps = 1e0 .. 1e-3
  for (int idx : fit.window) CHECK(idx <= 3);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fit window excludes the rebound branch") {
  // V-shaped series: sqrt(eps) decay to a minimum, then a rebound whose
  // points rise back above the floor cutoff.
  const std::vector<std::pair<double, double>> pts = {
      {1.0, 8.0},    {1e-1, 2.53}, {1e-2, 0.8},
      {1e-3, 0.253}, {1e-4, 0.8},  {1e-5, 2.53}};
  const RateFit fit = fit_rate(pts, 3.0);
  REQUIRE(fit.conclusive);
  CHECK(fit.window.size() == 3);  // eps = 1e0 .. 1e-2, nothing past the min
  for (int idx : fit.window) CHECK(idx <= 2);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("degenerate fits are inconclusive") {
  CHECK(!fit_rate({}).conclusive);
  CHECK(!fit_rate({{1.0, 1.0}, {0.1, 0.5}}).conclusive);
  // Constant error: the window keeps nothing above the floor.
  std::vector<std::pair<double, double>> flat;
  for (int k = 0; k <= 5; ++k) flat.push_back({std::pow(10.0, -k), 0.25});
  CHECK(!fit_rate(flat).conclusive);
  // Repeated epsilon values give a zero-variance abscissa.
  const RateFit rep = fit_rate({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}});
  CHECK(!rep.conclusive);
}

TEST_CASE("damping expression is nonnegative and vanishes on the diagonal") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> mag(0.0, 10.0);
  std::uniform_real_distribution<double> betad(0.0, 0.999);
  for (int i = 0; i < 100000; ++i) {
    const double a = mag(rng), b = mag(rng), beta = betad(rng);
    CHECK(damping_monotone(a, b, beta) >= -1e-15);
  }
  CHECK(damping_monotone(3.0, 3.0, 0.5) == 0.0);
  CHECK(damping_monotone(4.0, 1.0, 0.5) ==
        doctest::Approx(3.0 * (2.0 - 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(damping_monotone(-1.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(damping_monotone(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("exact norms match the polar-grid oracle") {
  for (double t : {0.1, 0.3, 0.5, 0.8}) {
    const double l2sq = oracle::integrate_disk([t](Vec2 p) {
      const Vec2 u = exact_velocity(t, p);
      return dot(u, u);
    });
    CHECK(exact_l2_norm_omega(t) ==
          doctest::Approx(std::sqrt(l2sq)).epsilon(1e-10));
    const double h1sq = oracle::integrate_disk([t](Vec2 p) {
      const auto g = exact_velocity_gradient(t, p);
      return g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] +
             g[1][1] * g[1][1];
    });
    CHECK(exact_h1_seminorm_omega(t) ==
          doctest::Approx(std::sqrt(h1sq)).epsilon(1e-10));
  }
  // Frozen reference values at the midpoint of the time interval.
  CHECK(std::pow(exact_l2_norm_omega(0.5), 2) ==
        doctest::Approx(4.60997651648516).epsilon(1e-12));
  CHECK(std::pow(exact_h1_seminorm_omega(0.5), 2) ==
        doctest::Approx(164.019114955693).epsilon(1e-12));
}

TEST_CASE("discrete errors of simple fields") {
  const Mesh mesh = alfeld_split(build_uniform(8));
  auto [vs, ps] = build_spaces(mesh);
  (void)ps;
  const Geometry geom = build_geometry(mesh, 5, 6);

  // Zero field: the error is the exact norm.
  const std::vector<double> zero(vs.n_dofs(), 0.0);
  CHECK(error_l2_omega(vs, zero, 0.5, geom) ==
        doctest::Approx(exact_l2_norm_omega(0.5)).epsilon(1e-4));
  const double h1 = error_h1_omega(vs, zero, 0.5, geom);
  const double want = std::sqrt(std::pow(exact_l2_norm_omega(0.5), 2) +
                                std::pow(exact_h1_seminorm_omega(0.5), 2));
  CHECK(h1 == doctest::Approx(want).epsilon(1e-4));

  // Interpolating the exact solution leaves only the interpolation error.
  const std::vector<double> ih = interpolate(
      vs, [](Vec2 p) { return exact_velocity(0.5, p); });
  CHECK(error_l2_omega(vs, ih, 0.5, geom) < 5e-2);
  CHECK(error_l2_omega(vs, ih, 0.5, geom) <
        0.1 * error_l2_omega(vs, zero, 0.5, geom));
}

TEST_CASE("divergence norm flags non-solenoidal fields") {
  const Mesh mesh = alfeld_split(build_uniform(4));
  auto [vs, ps] = build_spaces(mesh);
  (void)ps;
  const std::vector<double> rot =
      interpolate(vs, [](Vec2 p) -> Vec2 { return {-p.y, p.x}; });
  CHECK(div_norm(vs, rot) < 1e-13);
  const std::vector<double> expanding =
      interpolate(vs, [](Vec2 p) -> Vec2 { return {p.x, p.y}; });
  // div = 2 over the box: L2 norm is 2 * sqrt(area) = 4.
  CHECK(div_norm(vs, expanding) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("energy functional decomposes into its two terms") {
  const Mesh mesh = alfeld_split(build_uniform(4));
  auto [vs, ps] = build_spaces(mesh);
  (void)ps;
  const Geometry geom = build_geometry(mesh, 5, 4);
  const std::vector<double> u =
      interpolate(vs, [](Vec2 p) -> Vec2 { return {p.y, -p.x}; });
  // |grad u|_F^2 = 2 pointwise, integrated over the box: 8.
  const double e1 = energy_functional(vs, u, 1.0, 0.25, 1.5, geom);
  const double e2 = energy_functional(vs, u, 1.0, 0.25, 2.5, geom);
  CHECK(e2 - e1 == doctest::Approx(8.0).epsilon(1e-11));

  const double n1 = l2_norm_d1(vs, geom, u);
  const double eps = 0.1;
  const double e3 = energy_functional(vs, u, eps, 0.25, 1.5, geom);
  CHECK(e3 - (e1 - std::pow(n1, 1.75)) ==
        doctest::Approx(std::pow(n1, 1.75) / eps).epsilon(1e-11));
  CHECK_THROWS_AS(energy_functional(vs, u, 0.0, 0.25, 1.0, geom),
                  std::invalid_argument);
}
