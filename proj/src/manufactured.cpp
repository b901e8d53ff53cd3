#include "fdflow/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace fdflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec2 exact_velocity(double t, Vec2 p) {
  const double r2 = p.x * p.x + p.y * p.y;
  const double a = 2.0 * kPi * std::sin(kPi * t) * std::cos(kPi * r2);
  return {a * p.y, -a * p.x};
}

std::array<std::array<double, 2>, 2> exact_velocity_gradient(double t, Vec2 p) {
  const double r2 = p.x * p.x + p.y * p.y;
  const double s = std::sin(kPi * t);
  const double c = std::cos(kPi * r2);
  const double sr = std::sin(kPi * r2);
  // u = A(r^2) (y, -x) with A = 2*pi*s*cos(pi*r^2), A' = -2*pi^2*s*sin(pi*r^2)
  const double a = 2.0 * kPi * s * c;
  const double ap2 = -4.0 * kPi * kPi * s * sr;  // 2 A'
  return {{{ap2 * p.x * p.y, a + ap2 * p.y * p.y},
           {-a - ap2 * p.x * p.x, -ap2 * p.x * p.y}}};
}

double exact_pressure(Vec2 p) {
  const double r2 = p.x * p.x + p.y * p.y;
  return std::sin(kPi * r2) - 2.0 / kPi;
}

Vec2 forcing(double t, Vec2 p, double mu) {
  const double r2 = p.x * p.x + p.y * p.y;
  const double s = std::sin(kPi * t);
  const double c = std::cos(kPi * t);
  const double cr = std::cos(kPi * r2);
  const double sr = std::sin(kPi * r2);

  // u_t = 2*pi^2*c*cr * (y, -x)
  const double ut = 2.0 * kPi * kPi * c * cr;
  // -mu*lap(u) = 8*pi^2*mu*s*(2*sr + pi*r^2*cr) * (y, -x)
  const double visc = 8.0 * kPi * kPi * mu * s * (2.0 * sr + kPi * r2 * cr);
  // (u.grad)u = -A^2 (x, y) with A = 2*pi*s*cr; grad(p) = 2*pi*cr (x, y)
  const double a = 2.0 * kPi * s * cr;
  const double radial = 2.0 * kPi * cr - a * a;

  return {(ut + visc) * p.y + radial * p.x,
          -(ut + visc) * p.x + radial * p.y};
}

}  // namespace fdflow
