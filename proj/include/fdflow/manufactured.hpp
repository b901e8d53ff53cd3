#pragma once

#include "fdflow/mesh.hpp"

namespace fdflow {

/// Benchmark flow on the disk r^2 < 1/2: a rotating field that vanishes on
/// the immersed boundary for all t and at t = 0 everywhere.
///   u = 2*pi*sin(pi*t)*cos(pi*r^2) * (y, -x)
///   p = sin(pi*r^2) - 2/pi
/// The forcing is u_t + (u.grad)u - mu*lap(u) + grad(p) in closed form.

Vec2 exact_velocity(double t, Vec2 p);

/// g[i][j] = d u_i / d x_j.
std::array<std::array<double, 2>, 2> exact_velocity_gradient(double t, Vec2 p);

double exact_pressure(Vec2 p);

Vec2 forcing(double t, Vec2 p, double mu);

}  // namespace fdflow
