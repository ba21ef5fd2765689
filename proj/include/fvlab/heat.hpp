#pragma once
// Implicit finite-volume solver for u_t - u_xx = g on an interval with
// homogeneous Dirichlet ends.  Unknowns live at the mesh points, the two end
// faces act as boundary points with value 0, and the two-point flux
//   F_{i+1/2} = -(u_{i+1} - u_i) / (x_{i+1} - x_i)
// is evaluated at the new time level:
//   |K_i| (u_i^{n+1} - u_i^n)/dt + F_{i+1/2}^{n+1} - F_{i-1/2}^{n+1}
//       = |K_i| g(x_i, t_{n+1}).
// The associated discrete norms (L2, H1_0) and the parabolic energy estimate
// are provided alongside the stepper.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fvlab/mesh.hpp"
#include "fvlab/profiles.hpp"

namespace fvlab {

struct HeatProblem {
  SmoothProfile u_ini;                          // must vanish at both ends
  std::function<double(double, double)> source; // g(x, t); empty means zero
  double final_time = 1.0;

  double source_at(double x, double t) const { return source ? source(x, t) : 0.0; }
};

// Point-to-point distances including the boundary faces: h[0] is the distance
// from the left face to the first point, h[m] from the last point to the
// right face.
inline std::vector<double> dirichlet_spacings(const Mesh1D& mesh) {
  const int m = mesh.cell_count();
  std::vector<double> h(m + 1);
  h[0] = mesh.points[0] - mesh.faces.front();
  for (int i = 1; i < m; ++i) h[i] = mesh.points[i] - mesh.points[i - 1];
  h[m] = mesh.faces.back() - mesh.points[m - 1];
  return h;
}

// Two-point diffusive flux through a face.
inline double heat_flux(double u_left, double u_right, double h_half) {
  if (!(h_half > 0)) throw std::invalid_argument("heat_flux: need h_half > 0");
  return -(u_right - u_left) / h_half;
}

// Tridiagonal system solved by the Thomas algorithm.  The heat matrices are
// strictly diagonally dominant, so no pivoting is required.
struct TridiagonalSystem {
  std::vector<double> sub, diag, super, rhs;  // sub[0] and super[n-1] unused

  std::vector<double> solve() const {
    const std::size_t n = diag.size();
    if (sub.size() != n || super.size() != n || rhs.size() != n)
      throw std::invalid_argument("TridiagonalSystem: inconsistent sizes");
    std::vector<double> c(n), d(n), x(n);
    c[0] = super[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double denom = diag[i] - sub[i] * c[i - 1];
      c[i] = super[i] / denom;
      d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  }

  double residual_inf(const std::vector<double>& x) const {
    const std::size_t n = diag.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = diag[i] * x[i] - rhs[i];
      if (i > 0) r += sub[i] * x[i - 1];
      if (i + 1 < n) r += super[i] * x[i + 1];
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  }
};

// One backward-Euler step.  Throws if the direct solve leaves a residual
// above 1e-12 relative to the right-hand side.
inline CellField implicit_heat_step(const CellField& field, double dt,
                                    const HeatProblem& problem) {
  if (!(dt > 0)) throw std::invalid_argument("implicit_heat_step: need dt > 0");
  const Mesh1D& mesh = *field.mesh;
  const int m = mesh.cell_count();
  const std::vector<double> h = dirichlet_spacings(mesh);
  const double t_new = field.time + dt;

  TridiagonalSystem sys;
  sys.sub.assign(m, 0.0);
  sys.diag.assign(m, 0.0);
  sys.super.assign(m, 0.0);
  sys.rhs.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double vol = mesh.width(i);
    sys.diag[i] = vol / dt + 1.0 / h[i] + 1.0 / h[i + 1];
    if (i > 0) sys.sub[i] = -1.0 / h[i];
    if (i + 1 < m) sys.super[i] = -1.0 / h[i + 1];
    sys.rhs[i] = vol / dt * field.values[i] +
                 vol * problem.source_at(mesh.points[i], t_new);
  }

  CellField next{field.mesh, sys.solve(), t_new};

  double rhs_scale = 0.0;
  for (double b : sys.rhs) rhs_scale = std::max(rhs_scale, std::abs(b));
  if (sys.residual_inf(next.values) > 1e-12 * std::max(rhs_scale, 1.0))
    throw std::runtime_error("implicit_heat_step: linear solve residual too large");
  return next;
}

struct HeatRun {
  MeshPtr mesh;
  std::vector<CellField> history;  // steps+1 fields
};

inline HeatRun run_heat(const HeatProblem& problem, MeshPtr mesh, const TimeGrid& tg) {
  HeatRun run;
  run.mesh = mesh;
  run.history.reserve(tg.steps + 1);
  run.history.push_back({mesh, sample_at_points(problem.u_ini, *mesh), 0.0});
  for (int n = 0; n < tg.steps; ++n)
    run.history.push_back(implicit_heat_step(run.history.back(), tg.dt, problem));
  return run;
}

// Discrete L2 norm: (sum_i |K_i| u_i^2)^{1/2}.
inline double l2_norm(const CellField& field) {
  const Mesh1D& mesh = *field.mesh;
  double acc = 0.0;
  for (int i = 0; i < mesh.cell_count(); ++i)
    acc += mesh.width(i) * field.values[i] * field.values[i];
  return std::sqrt(acc);
}

// Discrete H1_0 seminorm with zero boundary values:
// (sum over faces of (u_{i+1} - u_i)^2 / h_{i+1/2})^{1/2}.
inline double h10_norm(const CellField& field) {
  const Mesh1D& mesh = *field.mesh;
  const int m = mesh.cell_count();
  const std::vector<double> h = dirichlet_spacings(mesh);
  double acc = 0.0;
  for (int f = 0; f <= m; ++f) {
    const double left = (f == 0) ? 0.0 : field.values[f - 1];
    const double right = (f == m) ? 0.0 : field.values[f];
    const double jump = right - left;
    acc += jump * jump / h[f];
  }
  return std::sqrt(acc);
}

// ||u||_L2 / ||u||_H1_0; bounded by the interval length for any field.
inline double poincare_ratio(const CellField& field) {
  const double denom = h10_norm(field);
  if (denom == 0.0)
    throw std::invalid_argument("poincare_ratio: field is identically zero");
  return l2_norm(field) / denom;
}

// sum_n dt ||u^{n+1}||_{H1_0}^2 over the whole run.  For zero-source runs this
// is bounded by ||u^0||_{L2}^2 / 2.
inline double energy_estimate(const HeatRun& run) {
  double acc = 0.0;
  for (std::size_t n = 1; n < run.history.size(); ++n) {
    const double dt = run.history[n].time - run.history[n - 1].time;
    const double norm = h10_norm(run.history[n]);
    acc += dt * norm * norm;
  }
  return acc;
}

// Discrete L2(0,T; L2) error against an exact solution sampled at the points.
inline double l2l2_error(const HeatRun& run,
                         const std::function<double(double, double)>& exact) {
  const Mesh1D& mesh = *run.mesh;
  double acc = 0.0;
  for (std::size_t n = 1; n < run.history.size(); ++n) {
    const CellField& field = run.history[n];
    const double dt = field.time - run.history[n - 1].time;
    double level = 0.0;
    for (int i = 0; i < mesh.cell_count(); ++i) {
      const double e = field.values[i] - exact(mesh.points[i], field.time);
      level += mesh.width(i) * e * e;
    }
    acc += dt * level;
  }
  return std::sqrt(acc);
}

// Largest step-wise defect of the discrete balance
//   sum_i |K_i| (u^{n+1}_i - u^n_i) + dt (F_right - F_left) - dt sum_i |K_i| g_i = 0,
// relative to the initial mass scale.  The interior fluxes cancel exactly by
// conservativity, so only the boundary fluxes and the source enter.
inline double heat_mass_balance_residual(const HeatRun& run, const HeatProblem& problem) {
  const Mesh1D& mesh = *run.mesh;
  const int m = mesh.cell_count();
  const std::vector<double> h = dirichlet_spacings(mesh);
  double scale = 1.0;
  for (int i = 0; i < m; ++i)
    scale += mesh.width(i) * std::abs(run.history.front().values[i]);
  double worst = 0.0;
  for (std::size_t n = 1; n < run.history.size(); ++n) {
    const CellField& now = run.history[n];
    const CellField& prev = run.history[n - 1];
    const double dt = now.time - prev.time;
    double defect = 0.0;
    for (int i = 0; i < m; ++i) {
      defect += mesh.width(i) * (now.values[i] - prev.values[i]);
      defect -= dt * mesh.width(i) * problem.source_at(mesh.points[i], now.time);
    }
    const double flux_left = heat_flux(0.0, now.values[0], h[0]);
    const double flux_right = heat_flux(now.values[m - 1], 0.0, h[m]);
    defect += dt * (flux_right - flux_left);
    worst = std::max(worst, std::abs(defect) / scale);
  }
  return worst;
}

}  // namespace fvlab
