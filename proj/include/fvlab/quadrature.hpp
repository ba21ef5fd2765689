#pragma once
// Gauss-Legendre rules used for cell means and space-time integrals.

#include <array>
#include <cmath>
#include <functional>

namespace fvlab {

// nodes/weights on the reference interval [-1, 1]
inline constexpr std::array<double, 2> kGauss2Nodes = {-0.5773502691896257645091488,
                                                       0.5773502691896257645091488};
inline constexpr std::array<double, 2> kGauss2Weights = {1.0, 1.0};

inline constexpr std::array<double, 3> kGauss3Nodes = {-0.7745966692414833770358531, 0.0,
                                                       0.7745966692414833770358531};
inline constexpr std::array<double, 3> kGauss3Weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// 2-point Gauss on [a, b]
template <class F>
double integrate_gauss2(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int q = 0; q < 2; ++q) acc += kGauss2Weights[q] * f(mid + half * kGauss2Nodes[q]);
  return half * acc;
}

// 3-point Gauss on [a, b]
template <class F>
double integrate_gauss3(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int q = 0; q < 3; ++q) acc += kGauss3Weights[q] * f(mid + half * kGauss3Nodes[q]);
  return half * acc;
}

// mean value of f over the rectangle [x0,x1] x [y0,y1], 3x3 tensor Gauss
template <class F>
double cell_mean_gauss3(const F& f, double x0, double x1, double y0, double y1) {
  const double xm = 0.5 * (x0 + x1), xh = 0.5 * (x1 - x0);
  const double ym = 0.5 * (y0 + y1), yh = 0.5 * (y1 - y0);
  double acc = 0.0;
  for (int qx = 0; qx < 3; ++qx) {
    const double x = xm + xh * kGauss3Nodes[qx];
    double row = 0.0;
    for (int qy = 0; qy < 3; ++qy)
      row += kGauss3Weights[qy] * f(x, ym + yh * kGauss3Nodes[qy]);
    acc += kGauss3Weights[qx] * row;
  }
  return 0.25 * acc;  // divide by the reference measure 4
}

}  // namespace fvlab
