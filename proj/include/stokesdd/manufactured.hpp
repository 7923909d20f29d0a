#pragma once

#include <array>
#include <cmath>

namespace stokesdd {

/// Reference flow on the unit square with homogeneous velocity boundary data:
///   u1 =  sin^3(pi x) sin^2(pi y) cos(pi y)
///   u2 = -sin^2(pi x) cos(pi x) sin^3(pi y)
///   p  =  x^2 - y^2            (zero mean on the square)
/// The body force f = -laplace(u) + grad(p) is differentiated by hand below:
///   d2/dt2 sin^3(pi t) = 3 pi^2 sin(pi t) (2 cos^2 - sin^2)(pi t)
///   d2/dt2 sin^2(pi t) cos(pi t) = pi^2 (2 cos^3 - 7 sin^2 cos)(pi t)
namespace manufactured {

inline constexpr double kPi = 3.14159265358979323846;

inline std::array<double, 2> velocity(double x, double y) {
  const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
  const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
  return {sx * sx * sx * sy * sy * cy, -sx * sx * cx * sy * sy * sy};
}

inline double pressure(double x, double y) { return x * x - y * y; }

/// Row-major gradient: [[du1/dx, du1/dy], [du2/dx, du2/dy]].
inline std::array<double, 4> velocity_gradient(double x, double y) {
  const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
  const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
  const double d_sin3_x = 3.0 * kPi * sx * sx * cx;            // (sin^3)'
  const double d_s2c_y = kPi * (2.0 * sy * cy * cy - sy * sy * sy);  // (sin^2 cos)'
  const double d_s2c_x = kPi * (2.0 * sx * cx * cx - sx * sx * sx);
  const double d_sin3_y = 3.0 * kPi * sy * sy * cy;
  return {d_sin3_x * sy * sy * cy, sx * sx * sx * d_s2c_y,
          -d_s2c_x * sy * sy * sy, -sx * sx * cx * d_sin3_y};
}

inline std::array<double, 2> body_force(double x, double y) {
  const double pi2 = kPi * kPi;
  const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
  const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
  const double lap1 = pi2 * (3.0 * sx * (2.0 * cx * cx - sx * sx) * sy * sy * cy +
                             sx * sx * sx * (2.0 * cy * cy * cy - 7.0 * sy * sy * cy));
  const double lap2 = -pi2 * ((2.0 * cx * cx * cx - 7.0 * sx * sx * cx) * sy * sy * sy +
                              sx * sx * cx * 3.0 * sy * (2.0 * cy * cy - sy * sy));
  return {-lap1 + 2.0 * x, -lap2 - 2.0 * y};
}

} // namespace manufactured
} // namespace stokesdd
