#pragma once
// Smooth profiles used as initial data and test functions.  Most are built
// from the C-infinity bump
//   psi(s) = exp(1 - 1/(1 - s^2))  for |s| < 1,  0 otherwise,
// which vanishes with all derivatives at the edge of its support; a periodic
// sine bump with a two-mode spectrum is provided for refinement studies.

#include <cmath>
#include <functional>
#include <numbers>

namespace fvlab {

namespace detail {
inline double bump_value(double s) {
  const double t = 1.0 - s * s;
  return t > 0.0 ? std::exp(1.0 - 1.0 / t) : 0.0;
}
inline double bump_slope(double s) {  // d/ds of bump_value
  const double t = 1.0 - s * s;
  if (t <= 0.0) return 0.0;
  return bump_value(s) * (-2.0 * s) / (t * t);
}
}  // namespace detail

struct SmoothProfile {
  std::function<double(double)> value;
  std::function<double(double)> slope;
};

inline SmoothProfile bump_profile(double center, double radius, double amplitude = 1.0) {
  auto value = [=](double x) {
    return amplitude * detail::bump_value((x - center) / radius);
  };
  auto slope = [=](double x) {
    return amplitude * detail::bump_slope((x - center) / radius) / radius;
  };
  return {value, slope};
}

inline SmoothProfile constant_profile(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

// 1-periodic bump sin^4(pi s), s = x - center + 1/2, peaking at the center
// with value 1 and touching 0 (to fourth order) half a period away.  Its
// spectrum stops at the second harmonic, so refinement studies reach the
// asymptotic first-order regime on coarse meshes where the compactly
// supported bump is still dominated by its steep higher derivatives.
inline SmoothProfile sine_bump_profile(double center, double amplitude = 1.0) {
  constexpr double pi = std::numbers::pi;
  auto value = [=](double x) {
    const double s = std::sin(pi * (x - center + 0.5));
    return amplitude * s * s * s * s;
  };
  auto slope = [=](double x) {
    const double a = pi * (x - center + 0.5);
    const double s = std::sin(a);
    return amplitude * 4.0 * pi * s * s * s * std::cos(a);
  };
  return {value, slope};
}

// Radial 2D bump with analytic partial derivatives.
struct ScalarField2D {
  std::function<double(double, double)> value;
  std::function<double(double, double)> ddx;
  std::function<double(double, double)> ddy;
};

inline ScalarField2D bump_field(double cx, double cy, double radius,
                                double amplitude = 1.0) {
  auto r2 = [=](double x, double y) {
    const double sx = (x - cx) / radius, sy = (y - cy) / radius;
    return sx * sx + sy * sy;
  };
  auto value = [=](double x, double y) {
    const double t = 1.0 - r2(x, y);
    return t > 0.0 ? amplitude * std::exp(1.0 - 1.0 / t) : 0.0;
  };
  // d/dx exp(1 - 1/t) = value * (-1/t^2) * dt/dx, dt/dx = -2(x-cx)/radius^2
  auto ddx = [=](double x, double y) {
    const double t = 1.0 - r2(x, y);
    if (t <= 0.0) return 0.0;
    return value(x, y) * (-2.0 * (x - cx) / (radius * radius)) / (t * t);
  };
  auto ddy = [=](double x, double y) {
    const double t = 1.0 - r2(x, y);
    if (t <= 0.0) return 0.0;
    return value(x, y) * (-2.0 * (y - cy) / (radius * radius)) / (t * t);
  };
  return {value, ddx, ddy};
}

// Space-time test function with analytic derivatives, compactly supported in
// space and vanishing (with all derivatives) at the final time.
struct TestFunction2D {
  std::function<double(double, double, double)> value;  // (x, y, t)
  std::function<double(double, double, double)> ddt;
  std::function<double(double, double, double)> ddx;
  std::function<double(double, double, double)> ddy;
};

// bump_field(cx, cy, radius) multiplied by the time window psi(t/T).
inline TestFunction2D bump_test_function(double cx, double cy, double radius,
                                         double final_time) {
  const ScalarField2D space = bump_field(cx, cy, radius);
  const double T = final_time;
  auto window = [T](double t) { return detail::bump_value(t / T); };
  auto window_dt = [T](double t) { return detail::bump_slope(t / T) / T; };
  TestFunction2D phi;
  phi.value = [=](double x, double y, double t) { return space.value(x, y) * window(t); };
  phi.ddt = [=](double x, double y, double t) { return space.value(x, y) * window_dt(t); };
  phi.ddx = [=](double x, double y, double t) { return space.ddx(x, y) * window(t); };
  phi.ddy = [=](double x, double y, double t) { return space.ddy(x, y) * window(t); };
  return phi;
}

}  // namespace fvlab
