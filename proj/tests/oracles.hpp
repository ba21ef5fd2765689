#pragma once
// Independent reference computations used by the tests.  Everything here is
// deliberately brute-force or textbook-style so that it shares no code with
// the library implementations it checks.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Composite Simpson integration, independent of the library quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int pieces) {
  const double h = (b - a) / pieces;
  double acc = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double x0 = a + k * h, x1 = x0 + h;
    acc += (h / 6.0) * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  return acc;
}

// Godunov flux by exhaustive scan of f over the state interval.
inline double brute_godunov(const std::function<double(double)>& f, double uL,
                            double uR, int samples = 20001) {
  const double lo = uL < uR ? uL : uR;
  const double hi = uL < uR ? uR : uL;
  double best = f(lo);
  for (int k = 1; k <= samples; ++k) {
    const double v = f(lo + (hi - lo) * k / samples);
    if (uL <= uR ? v < best : v > best) best = v;
  }
  return best;
}

// Decay factor of the discrete sine mode under one implicit step of the
// three-point heat operator on a uniform mesh of width h: the mode
// sin(pi x_i) is an eigenvector with eigenvalue lambda_h = 4 sin^2(pi h/2)/h^2
// and the implicit step scales it by 1/(1 + dt lambda_h).
inline double implicit_sine_decay(double h, double dt) {
  const double pi = std::acos(-1.0);
  const double s = std::sin(0.5 * pi * h);
  const double lambda = 4.0 * s * s / (h * h);
  return 1.0 / (1.0 + dt * lambda);
}

// Dense Gaussian elimination with partial pivoting, for checking the
// tridiagonal solver on small systems.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (int k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Max of |g| over a uniform sampling of [a, b].
inline double max_abs_on(const std::function<double(double)>& g, double a, double b,
                         int samples = 20000) {
  double worst = 0.0;
  for (int k = 0; k <= samples; ++k)
    worst = std::max(worst, std::abs(g(a + (b - a) * k / samples)));
  return worst;
}

}  // namespace oracle
