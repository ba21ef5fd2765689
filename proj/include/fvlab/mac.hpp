#pragma once
// MAC staggered grid for the 2D mass balance.  Scalars (density) live at
// rectangle cells, the x-velocity u lives on vertical faces and the
// y-velocity v on horizontal faces.  The explicit mass update is
//   rho_K^{n+1} = rho_K^n - dt/|K| sum_{faces of K} |face| rho_face u_face . n
// with upwind (or centered) face densities and impermeable walls: the normal
// velocity on boundary faces is taken to be zero.  The same flux assembly
// also yields the per-cell consistency residual
//   C(rho, u)_K^n = (rho_K^{n+1} - rho_K^n)/dt
//                   + (1/|K|) sum |face| rho_face^n u_face^n . n
// whose weighted space-time sum against a smooth test function is compared
// with the continuous weak form in the Lax-Wendroff style experiments.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fvlab/mesh.hpp"
#include "fvlab/profiles.hpp"
#include "fvlab/quadrature.hpp"

namespace fvlab {

struct MacGrid {
  std::vector<double> x_faces, y_faces;  // strictly increasing, >= 2 entries
  std::vector<double> dx, dy;            // cached cell widths

  static MacGrid build(std::vector<double> xf, std::vector<double> yf) {
    MacGrid g;
    g.x_faces = std::move(xf);
    g.y_faces = std::move(yf);
    auto check = [](const std::vector<double>& f, const char* axis) {
      if (f.size() < 2)
        throw std::invalid_argument(std::string("MacGrid: need >= 2 ") + axis + " faces");
      for (std::size_t i = 0; i + 1 < f.size(); ++i)
        if (!(f[i] < f[i + 1]))
          throw std::invalid_argument(std::string("MacGrid: ") + axis +
                                      " faces must be strictly increasing");
    };
    check(g.x_faces, "x");
    check(g.y_faces, "y");
    g.dx.resize(g.x_faces.size() - 1);
    g.dy.resize(g.y_faces.size() - 1);
    for (std::size_t i = 0; i < g.dx.size(); ++i) g.dx[i] = g.x_faces[i + 1] - g.x_faces[i];
    for (std::size_t j = 0; j < g.dy.size(); ++j) g.dy[j] = g.y_faces[j + 1] - g.y_faces[j];
    return g;
  }

  int nx() const { return static_cast<int>(dx.size()); }
  int ny() const { return static_cast<int>(dy.size()); }
  int cell_count() const { return nx() * ny(); }
  int vedge_count() const { return (nx() + 1) * ny(); }  // vertical faces, carry u
  int hedge_count() const { return nx() * (ny() + 1); }  // horizontal faces, carry v

  int cell(int i, int j) const { return j * nx() + i; }
  int vedge(int i, int j) const { return j * (nx() + 1) + i; }  // i in [0, nx], j in [0, ny)
  int hedge(int i, int j) const { return j * nx() + i; }        // i in [0, nx), j in [0, ny]

  double cell_area(int i, int j) const { return dx[i] * dy[j]; }
  double domain_area() const {
    return (x_faces.back() - x_faces.front()) * (y_faces.back() - y_faces.front());
  }

  // Dual cell of a vertical face: half of each adjacent cell (one half at the
  // wall).  Vertical faces have length dy[j].
  double dual_area_vertical(int i, int j) const {
    double a = 0.0;
    if (i > 0) a += 0.5 * dx[i - 1] * dy[j];
    if (i < nx()) a += 0.5 * dx[i] * dy[j];
    return a;
  }
  double dual_area_horizontal(int i, int j) const {
    double a = 0.0;
    if (j > 0) a += 0.5 * dx[i] * dy[j - 1];
    if (j < ny()) a += 0.5 * dx[i] * dy[j];
    return a;
  }
};

// Faces of both axes bisected; refines every cell into four.
inline std::vector<double> bisect_faces(const std::vector<double>& faces) {
  std::vector<double> out;
  out.reserve(2 * faces.size() - 1);
  for (std::size_t i = 0; i + 1 < faces.size(); ++i) {
    out.push_back(faces[i]);
    out.push_back(0.5 * (faces[i] + faces[i + 1]));
  }
  out.push_back(faces.back());
  return out;
}

inline MacGrid refine(const MacGrid& grid) {
  return MacGrid::build(bisect_faces(grid.x_faces), bisect_faces(grid.y_faces));
}

// max(max face length of one family / min face length of the other family);
// bounded under refinement for quasi-uniform grid sequences.
inline double quasi_uniformity_ratio(const MacGrid& grid) {
  const double max_dy = *std::max_element(grid.dy.begin(), grid.dy.end());
  const double min_dy = *std::min_element(grid.dy.begin(), grid.dy.end());
  const double max_dx = *std::max_element(grid.dx.begin(), grid.dx.end());
  const double min_dx = *std::min_element(grid.dx.begin(), grid.dx.end());
  // vertical faces have length dy, horizontal faces have length dx
  return std::max(max_dy / min_dx, max_dx / min_dy);
}

// Cell means of rho0 via 3x3 tensor Gauss; exact for polynomials of degree
// up to 5 per direction.
inline std::vector<double> project_density(
    const std::function<double(double, double)>& rho0, const MacGrid& grid) {
  std::vector<double> rho(grid.cell_count());
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i)
      rho[grid.cell(i, j)] =
          cell_mean_gauss3(rho0, grid.x_faces[i], grid.x_faces[i + 1], grid.y_faces[j],
                           grid.y_faces[j + 1]);
  return rho;
}

enum class EdgeDensity { Upwind, Centered };

// Face density from the two neighbouring cells; u_edge is the normal
// velocity oriented from K to L.  Upwind ties (u_edge == 0) fall back to the
// centered average.
inline double edge_density(double rho_K, double rho_L, double u_edge, EdgeDensity mode) {
  if (mode == EdgeDensity::Centered || u_edge == 0.0) return 0.5 * (rho_K + rho_L);
  return u_edge > 0.0 ? rho_K : rho_L;
}

struct MacState {
  std::vector<double> rho;  // cell_count()
  std::vector<double> u;    // vedge_count()
  std::vector<double> v;    // hedge_count()
  double time = 0.0;
};

namespace detail {

// Oriented mass fluxes (+x across vertical faces, +y across horizontal
// faces), already multiplied by the face length.  Boundary faces are walls:
// their flux is zero regardless of the stored velocity.
inline void mass_fluxes(const MacState& state, const MacGrid& g, EdgeDensity mode,
                        std::vector<double>& fu, std::vector<double>& fv) {
  fu.assign(g.vedge_count(), 0.0);
  fv.assign(g.hedge_count(), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) {
      const double un = state.u[g.vedge(i, j)];
      const double rho =
          edge_density(state.rho[g.cell(i - 1, j)], state.rho[g.cell(i, j)], un, mode);
      fu[g.vedge(i, j)] = g.dy[j] * un * rho;
    }
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double vn = state.v[g.hedge(i, j)];
      const double rho =
          edge_density(state.rho[g.cell(i, j - 1)], state.rho[g.cell(i, j)], vn, mode);
      fv[g.hedge(i, j)] = g.dx[i] * vn * rho;
    }
}

inline void check_state(const MacState& state, const MacGrid& g, const char* where) {
  if (static_cast<int>(state.rho.size()) != g.cell_count() ||
      static_cast<int>(state.u.size()) != g.vedge_count() ||
      static_cast<int>(state.v.size()) != g.hedge_count())
    throw std::invalid_argument(std::string(where) + ": state does not match the grid");
}

}  // namespace detail

// Per-cell consistency residual C(rho, u)_K^n built from state_n's fluxes and
// the density increment to state_np1.
inline std::vector<double> mass_residual(const MacState& state_n,
                                         const MacState& state_np1, double dt,
                                         const MacGrid& g, EdgeDensity mode) {
  detail::check_state(state_n, g, "mass_residual");
  detail::check_state(state_np1, g, "mass_residual");
  if (!(dt > 0)) throw std::invalid_argument("mass_residual: need dt > 0");
  std::vector<double> fu, fv;
  detail::mass_fluxes(state_n, g, mode, fu, fv);
  std::vector<double> res(g.cell_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int k = g.cell(i, j);
      const double div = fu[g.vedge(i + 1, j)] - fu[g.vedge(i, j)] +
                         fv[g.hedge(i, j + 1)] - fv[g.hedge(i, j)];
      res[k] = (state_np1.rho[k] - state_n.rho[k]) / dt + div / g.cell_area(i, j);
    }
  return res;
}

// Explicit mass step.  In upwind mode the positivity-preserving restriction
// dt * max |u_face| * max(perimeter/area) <= 1 is enforced.
inline MacState step_mass(const MacState& state, double dt, const MacGrid& g,
                          EdgeDensity mode) {
  detail::check_state(state, g, "step_mass");
  if (!(dt > 0)) throw std::invalid_argument("step_mass: need dt > 0");
  if (mode == EdgeDensity::Upwind) {
    double max_speed = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 1; i < g.nx(); ++i)
        max_speed = std::max(max_speed, std::abs(state.u[g.vedge(i, j)]));
    for (int j = 1; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        max_speed = std::max(max_speed, std::abs(state.v[g.hedge(i, j)]));
    double max_ratio = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        max_ratio = std::max(max_ratio, 2.0 * (g.dx[i] + g.dy[j]) / g.cell_area(i, j));
    const double ratio = dt * max_speed * max_ratio;
    if (ratio > 1.0 + 1e-12)
      throw CflError("step_mass: dt violates the positivity restriction (ratio " +
                         std::to_string(ratio) + ")",
                     ratio);
  }
  std::vector<double> fu, fv;
  detail::mass_fluxes(state, g, mode, fu, fv);
  MacState next = state;
  next.time = state.time + dt;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int k = g.cell(i, j);
      const double div = fu[g.vedge(i + 1, j)] - fu[g.vedge(i, j)] +
                         fv[g.hedge(i, j + 1)] - fv[g.hedge(i, j)];
      next.rho[k] = state.rho[k] - dt * div / g.cell_area(i, j);
    }
  return next;
}

inline double mac_total_mass(const MacGrid& g, const std::vector<double>& rho) {
  double total = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) total += g.cell_area(i, j) * rho[g.cell(i, j)];
  return total;
}

// Cell means of phi(., t) via 3x3 tensor Gauss.
inline std::vector<double> cell_means_at(const TestFunction2D& phi, double t,
                                         const MacGrid& g) {
  std::vector<double> means(g.cell_count());
  auto slice = [&phi, t](double x, double y) { return phi.value(x, y, t); };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      means[g.cell(i, j)] = cell_mean_gauss3(slice, g.x_faces[i], g.x_faces[i + 1],
                                             g.y_faces[j], g.y_faces[j + 1]);
  return means;
}

// sum_n dt sum_K |K| C(rho, u)_K^n phi_K^n with phi_K^n the cell mean of
// phi(., t_n).  `states` must hold tg.steps + 1 entries; the velocity of the
// last one is not used.
inline double lw_functional(const std::vector<MacState>& states,
                            const TestFunction2D& phi, const MacGrid& g,
                            const TimeGrid& tg, EdgeDensity mode) {
  if (static_cast<int>(states.size()) < tg.steps + 1)
    throw std::invalid_argument("lw_functional: need steps + 1 states");
  double total = 0.0;
  for (int n = 0; n < tg.steps; ++n) {
    const std::vector<double> res = mass_residual(states[n], states[n + 1], tg.dt, g, mode);
    const std::vector<double> means = cell_means_at(phi, n * tg.dt, g);
    double level = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const int k = g.cell(i, j);
        level += g.cell_area(i, j) * res[k] * means[k];
      }
    total += tg.dt * level;
  }
  return total;
}

// Continuous weak form of the mass balance against phi:
//   - int_Omega rho0 phi(., 0) - int_0^T int_Omega (rho phi_t + rho u . grad phi).
// Space integrals use 3x3 Gauss per cell of `g`, the time integral 2-point
// Gauss per slab of `tg`.  Vanishes when (rho, u) solves the balance weakly
// with initial datum rho0.
inline double weak_form_value(const std::function<double(double, double, double)>& rho,
                              const std::function<double(double, double, double)>& u1,
                              const std::function<double(double, double, double)>& u2,
                              const TestFunction2D& phi,
                              const std::function<double(double, double)>& rho0,
                              const MacGrid& g, const TimeGrid& tg) {
  auto space_integral = [&g](const std::function<double(double, double)>& f) {
    double total = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        total += g.cell_area(i, j) * cell_mean_gauss3(f, g.x_faces[i], g.x_faces[i + 1],
                                                      g.y_faces[j], g.y_faces[j + 1]);
    return total;
  };
  auto initial = [&](double x, double y) { return rho0(x, y) * phi.value(x, y, 0.0); };
  double value = -space_integral(initial);
  for (int n = 0; n < tg.steps; ++n) {
    const double t0 = n * tg.dt, t1 = (n + 1) * tg.dt;
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    for (int q = 0; q < 2; ++q) {
      const double t = mid + half * kGauss2Nodes[q];
      auto integrand = [&](double x, double y) {
        return rho(x, y, t) * (phi.ddt(x, y, t) + u1(x, y, t) * phi.ddx(x, y, t) +
                               u2(x, y, t) * phi.ddy(x, y, t));
      };
      value -= half * kGauss2Weights[q] * space_integral(integrand);
    }
  }
  return value;
}

// Samples a smooth (rho, u) pair onto grid functions: rho at cell centers,
// velocities at face midpoints.
inline MacState sample_state(const std::function<double(double, double, double)>& rho,
                             const std::function<double(double, double, double)>& u1,
                             const std::function<double(double, double, double)>& u2,
                             double t, const MacGrid& g) {
  MacState s;
  s.time = t;
  s.rho.resize(g.cell_count());
  s.u.resize(g.vedge_count());
  s.v.resize(g.hedge_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      s.rho[g.cell(i, j)] = rho(0.5 * (g.x_faces[i] + g.x_faces[i + 1]),
                                0.5 * (g.y_faces[j] + g.y_faces[j + 1]), t);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      s.u[g.vedge(i, j)] = u1(g.x_faces[i], 0.5 * (g.y_faces[j] + g.y_faces[j + 1]), t);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      s.v[g.hedge(i, j)] = u2(0.5 * (g.x_faces[i] + g.x_faces[i + 1]), g.y_faces[j], t);
  return s;
}

}  // namespace fvlab
