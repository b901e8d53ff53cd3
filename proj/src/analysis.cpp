#include "fdflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fdflow/assembly.hpp"
#include "fdflow/manufactured.hpp"
#include "fdflow/quadrature.hpp"

namespace fdflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Accumulate an Omega-side integral of a pointwise error density.
template <class Density>
double integrate_omega(const VelocitySpace& vs, const Geometry& geom,
                       Density&& density) {
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(geom.base_order);
  double sum = 0.0;
  for (Index e = 0; e < mesh.n_triangles(); ++e) {
    if (geom.cls[e] == ElementClass::Outside) continue;
    if (geom.cls[e] == ElementClass::Inside) {
      const Triangle tri = mesh.triangle_coords(e);
      const double area = signed_area(tri);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        const Vec2 x = l[0] * tri[0] + l[1] * tri[1] + l[2] * tri[2];
        sum += rule.weights[q] * area * density(e, l, x);
      }
    } else {
      const CutQuadrature& cq = geom.omega_rules[geom.cut_index[e]];
      for (size_t q = 0; q < cq.size(); ++q)
        sum += cq.weights[q] * density(e, cq.bary[q], cq.points[q]);
    }
  }
  return sum;
}

}  // namespace

double error_l2_omega(const VelocitySpace& vs, const std::vector<double>& u,
                      double t, const Geometry& geom) {
  const double sum = integrate_omega(
      vs, geom, [&](Index e, const std::array<double, 3>& l, Vec2 x) {
        const Vec2 diff = evaluate_velocity(vs, u, e, l) - exact_velocity(t, x);
        return dot(diff, diff);
      });
  return std::sqrt(std::max(sum, 0.0));
}

double error_h1_omega(const VelocitySpace& vs, const std::vector<double>& u,
                      double t, const Geometry& geom) {
  const double sum = integrate_omega(
      vs, geom, [&](Index e, const std::array<double, 3>& l, Vec2 x) {
        const Vec2 diff = evaluate_velocity(vs, u, e, l) - exact_velocity(t, x);
        const auto gh = evaluate_velocity_gradient(vs, u, e, l);
        const auto ge = exact_velocity_gradient(t, x);
        double grad2 = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double d = gh[i][j] - ge[i][j];
            grad2 += d * d;
          }
        return dot(diff, diff) + grad2;
      });
  return std::sqrt(std::max(sum, 0.0));
}

double div_norm(const VelocitySpace& vs, const std::vector<double>& u) {
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(4);
  double sum = 0.0;
  for (Index e = 0; e < mesh.n_triangles(); ++e) {
    const double area = signed_area(mesh.triangle_coords(e));
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto g = evaluate_velocity_gradient(vs, u, e, rule.points[q]);
      const double d = g[0][0] + g[1][1];
      sum += rule.weights[q] * area * d * d;
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

double rate_exponent(double k, double beta) {
  if (beta < 0.0 || beta >= 1.0)
    throw std::domain_error("rate_exponent: beta must be in [0, 1)");
  if (k < 0.0 || k >= 8.0 / 3.0)
    throw std::domain_error("rate_exponent: k must be in [0, 8/3)");
  return (16.0 - 6.0 * k) / (16.0 + 12.0 * k - 16.0 * beta - 3.0 * beta * k);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double floor_factor) {
  RateFit fit;
  fit.points = points;
  if (points.size() < 3) {
    fit.note = "inconclusive: fewer than 3 points";
    return fit;
  }

  double min_err = std::numeric_limits<double>::infinity();
  double eps_at_min = 0.0;
  for (const auto& [eps, err] : points) {
    if (!std::isfinite(err) || err <= 0.0) continue;
    if (err < min_err || (err == min_err && eps > eps_at_min)) {
      min_err = err;
      eps_at_min = eps;
    }
  }
  if (!std::isfinite(min_err)) {
    fit.note = "inconclusive: no finite positive errors";
    return fit;
  }

  // Decaying branch only: points at epsilon below the minimum belong to the
  // conditioning rebound and would contaminate the asymptotic-regime fit.
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& [eps, err] = points[i];
    if (std::isfinite(err) && err > floor_factor * min_err && eps >= eps_at_min)
      fit.window.push_back(static_cast<int>(i));
  }
  if (fit.window.size() < 2) {
    fit.note = "inconclusive: fewer than 2 points above the error floor";
    return fit;
  }

  double sx = 0.0, sy = 0.0;
  for (int i : fit.window) {
    sx += std::log(points[i].first);
    sy += std::log(points[i].second);
  }
  const double n = static_cast<double>(fit.window.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i : fit.window) {
    const double dx = std::log(points[i].first) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(points[i].second) - my);
  }
  if (sxx == 0.0) {
    fit.note = "inconclusive: epsilon values not distinct in window";
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.conclusive = true;
  fit.note = "fit over " + std::to_string(fit.window.size()) + " points";
  return fit;
}

double damping_monotone(double a, double b, double beta) {
  if (a < 0.0 || b < 0.0)
    throw std::domain_error("damping_monotone: a, b must be >= 0");
  if (beta < 0.0 || beta >= 1.0)
    throw std::domain_error("damping_monotone: beta must be in [0, 1)");
  const double q = 1.0 - beta;
  return (a - b) * (std::pow(a, q) - std::pow(b, q));
}

double energy_functional(const VelocitySpace& vs, const std::vector<double>& u,
                         double eps, double beta, double mu,
                         const Geometry& geom) {
  if (!(eps > 0.0)) throw std::invalid_argument("energy_functional: eps must be > 0");
  const Mesh& mesh = *vs.mesh;
  const TriRule& rule = tri_rule(4);
  double grad2 = 0.0;
  for (Index e = 0; e < mesh.n_triangles(); ++e) {
    const double area = signed_area(mesh.triangle_coords(e));
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto g = evaluate_velocity_gradient(vs, u, e, rule.points[q]);
      grad2 += rule.weights[q] * area *
               (g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] +
                g[1][1] * g[1][1]);
    }
  }
  const double nd1 = l2_norm_d1(vs, geom, u);
  return mu * grad2 + std::pow(nd1, 2.0 - beta) / eps;
}

double exact_l2_norm_omega(double t) {
  // ||u(t)||^2_{L2(Omega)} = pi (pi^2 - 4)/4 * sin^2(pi t)
  return std::sqrt(kPi * (kPi * kPi - 4.0) / 4.0) * std::abs(std::sin(kPi * t));
}

double exact_h1_seminorm_omega(double t) {
  // ||grad u(t)||^2_{L2(Omega)} = pi^3 (pi^2/3 + 2) * sin^2(pi t)
  return std::sqrt(kPi * kPi * kPi * (kPi * kPi / 3.0 + 2.0)) *
         std::abs(std::sin(kPi * t));
}

}  // namespace fdflow
