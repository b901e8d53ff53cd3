#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fdflow/fespace.hpp"
#include "fdflow/geometry.hpp"

namespace fdflow {

/// ||u_h - u(t,.)||_{L2(Omega)} via the geometry's Omega-side rules; pass a
/// geometry built with base rule degree >= 6.
double error_l2_omega(const VelocitySpace& vs, const std::vector<double>& u,
                      double t, const Geometry& geom);

/// Full H1(Omega) norm of the error: L2 part plus gradient part.
double error_h1_omega(const VelocitySpace& vs, const std::vector<double>& u,
                      double t, const Geometry& geom);

/// ||div u_h||_{L2(D)} over the whole box.
double div_norm(const VelocitySpace& vs, const std::vector<double>& u);

/// Convergence exponent A(k, beta) = (16 - 6k) / (16 + 12k - 16beta - 3beta k)
/// for the squared error; the observable norm rate is A/2. Domain: 0 <= beta
/// < 1, 0 <= k < 8/3 (throws std::domain_error outside).
double rate_exponent(double k, double beta);

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (epsilon, error) as given
  std::vector<int> window;                        // indices used in the fit
  double slope = 0.0;
  bool conclusive = false;
  std::string note;
};

/// Least-squares slope of log(error) vs log(epsilon) over the window of
/// points with error > floor_factor * min(error), restricted to the decaying
/// branch (epsilon >= the epsilon of the minimum; the rebound below it is
/// excluded). Fewer than 2 window points (or fewer than 3 inputs) flags the
/// fit inconclusive.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double floor_factor = 3.0);

/// (a - b)(a^{1-beta} - b^{1-beta}) for a, b >= 0; nonnegative.
double damping_monotone(double a, double b, double beta);

/// y = mu*||grad u||^2_{L2(D)} + (1/eps)*||u||^{2-beta}_{L2(D1)}.
double energy_functional(const VelocitySpace& vs, const std::vector<double>& u,
                         double eps, double beta, double mu,
                         const Geometry& geom);

/// Closed-form norms of the benchmark solution over Omega.
double exact_l2_norm_omega(double t);
double exact_h1_seminorm_omega(double t);

}  // namespace fdflow
