#pragma once
// Explicit finite-volume schemes for scalar conservation laws
// u_t + f(u)_x = 0 on periodic meshes, written in flux form with a two-point
// numerical flux:
//   |K_i| (u_i^{n+1} - u_i^n)/dt + F_{i+1/2} - F_{i-1/2} = 0,
//   F_{i+1/2} = Flux(u_i^n, u_{i+1}^n).
// Monotone fluxes (upwind, Godunov, Lax-Friedrichs with a large enough
// diffusion parameter) give schemes that preserve the invariant interval,
// are TVD on uniform meshes and satisfy a discrete Kruzhkov entropy
// inequality; all three properties are checked by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvlab/mesh.hpp"
#include "fvlab/transport.hpp"

namespace fvlab {

struct ConservationLaw {
  std::string name;
  std::function<double(double)> flux;    // f
  std::function<double(double)> dflux;   // f'
};

inline ConservationLaw linear_advection_law(double a) {
  return {"advection", [a](double u) { return a * u; }, [a](double) { return a; }};
}

inline ConservationLaw burgers_law() {
  return {"burgers", [](double u) { return u * u; }, [](double u) { return 2.0 * u; }};
}

namespace detail {

// max |f'| sampled on [lo, hi]
inline double max_abs_dflux(const ConservationLaw& law, double lo, double hi,
                            int samples = 2048) {
  double worst = 0.0;
  for (int k = 0; k <= samples; ++k)
    worst = std::max(worst, std::abs(law.dflux(lo + (hi - lo) * k / samples)));
  return worst;
}

// Scalar minimization over [lo, hi]: coarse scan to bracket the minimum,
// golden-section refinement down to `tol` on the abscissa, endpoints always
// considered.  Good for smooth f; exact scan fallback keeps mildly nonconvex
// fluxes honest.
inline double min_on_interval(const std::function<double(double)>& f, double lo,
                              double hi, double tol) {
  constexpr int kScan = 64;
  double best_x = lo, best_f = f(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double x = k == kScan ? hi : lo + (hi - lo) * k / kScan;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - (hi - lo) / kScan);
  double b = std::min(hi, best_x + (hi - lo) / kScan);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(best_f, std::min(f1, f2));
}

}  // namespace detail

// Godunov flux: min of f over [uL, uR] when uL <= uR, max over [uR, uL]
// otherwise.  Computed by bracketed scalar optimization with a 1e-12
// abscissa tolerance; equal states return f(s) exactly.
inline double godunov_value(const ConservationLaw& law, double uL, double uR) {
  if (uL == uR) return law.flux(uL);
  const double lo = std::min(uL, uR), hi = std::max(uL, uR);
  const double tol = 1e-12 * (1.0 + hi - lo);
  if (uL < uR) return detail::min_on_interval(law.flux, lo, hi, tol);
  auto neg = [&law](double u) { return -law.flux(u); };
  return -detail::min_on_interval(neg, lo, hi, tol);
}

// Two-point numerical flux plus the metadata the scheme driver needs:
// lipschitz_bound is the coefficient L in the step restriction
// dt * L <= min_i |K_i| that keeps the update monotone, and `monotone`
// records whether the flux is nondecreasing in its first and nonincreasing
// in its second argument on the declared state interval.
struct NumericalFlux {
  std::string name;
  std::function<double(double, double)> rule;
  double lipschitz_bound = 0.0;
  bool monotone = false;
};

inline NumericalFlux upwind_flux(double a) {
  if (!(a > 0)) throw std::invalid_argument("upwind_flux: need a > 0");
  return {"upwind", [a](double uL, double) { return a * uL; }, a, true};
}

inline NumericalFlux godunov_flux(const ConservationLaw& law, double state_lo,
                                  double state_hi) {
  NumericalFlux flux;
  flux.name = "godunov";
  flux.rule = [law](double uL, double uR) { return godunov_value(law, uL, uR); };
  flux.lipschitz_bound = detail::max_abs_dflux(law, state_lo, state_hi);
  flux.monotone = true;
  return flux;
}

// F(uL, uR) = (f(uL) + f(uR))/2 - lambda (uR - uL)/2.  Monotone only when
// lambda dominates |f'| on the state interval; a smaller lambda is accepted
// but flagged non-monotone so property tests can detect the broken scheme.
inline NumericalFlux lax_friedrichs_flux(const ConservationLaw& law, double lambda,
                                         double state_lo, double state_hi) {
  if (!(lambda >= 0)) throw std::invalid_argument("lax_friedrichs_flux: need lambda >= 0");
  NumericalFlux flux;
  flux.name = "lax-friedrichs";
  flux.rule = [law, lambda](double uL, double uR) {
    return 0.5 * (law.flux(uL) + law.flux(uR)) - 0.5 * lambda * (uR - uL);
  };
  flux.lipschitz_bound = lambda;
  flux.monotone = lambda >= detail::max_abs_dflux(law, state_lo, state_hi) - 1e-12;
  return flux;
}

// Finite-difference monotonicity probe on a grid of state pairs.
inline bool verify_monotone(const NumericalFlux& flux, double lo, double hi,
                            int samples = 32, double tol = 1e-10) {
  const double step = (hi - lo) / samples;
  for (int i = 0; i <= samples; ++i) {
    for (int j = 0; j <= samples; ++j) {
      const double a = lo + i * step, b = lo + j * step;
      if (i < samples && flux.rule(a + step, b) < flux.rule(a, b) - tol) return false;
      if (j < samples && flux.rule(a, b + step) > flux.rule(a, b) + tol) return false;
    }
  }
  return true;
}

// Explicit flux-form update over the mesh's own cells.  Each face flux is
// evaluated once per step, so the discrete integral sum_i |K_i| u_i
// telescopes to machine precision.
inline SchemeRun run_conservation_scheme(const ConservationLaw& law,
                                         const NumericalFlux& flux, MeshPtr mesh,
                                         const TimeGrid& tg, std::vector<double> u0) {
  const int m = mesh->cell_count();
  if (static_cast<int>(u0.size()) != m)
    throw std::invalid_argument("run_conservation_scheme: initial data size mismatch");
  double min_width = mesh->width(0);
  for (int i = 1; i < m; ++i) min_width = std::min(min_width, mesh->width(i));
  const double ratio = tg.dt * flux.lipschitz_bound / min_width;
  if (ratio > 1.0 + 1e-12)
    throw CflError("run_conservation_scheme: dt * L exceeds the smallest cell (ratio " +
                       std::to_string(ratio) + ")",
                   ratio);

  SchemeRun run;
  run.mesh = mesh;
  run.scheme_id = "fv-" + flux.name + "-" + law.name;
  run.cfl = ratio;
  run.history.reserve(tg.steps + 1);
  run.history.push_back({mesh, std::move(u0), 0.0});
  std::vector<double> face_flux(m), next(m);
  for (int n = 0; n < tg.steps; ++n) {
    const std::vector<double>& u = run.history.back().values;
    for (int i = 0; i < m; ++i) face_flux[i] = flux.rule(u[i], u[(i + 1) % m]);
    for (int i = 0; i < m; ++i) {
      const double left = face_flux[i == 0 ? m - 1 : i - 1];
      next[i] = u[i] - tg.dt / mesh->width(i) * (face_flux[i] - left);
    }
    run.history.push_back({mesh, next, (n + 1) * tg.dt});
  }
  return run;
}

// Total variation with periodic closure.
inline double total_variation(const std::vector<double>& u) {
  const std::size_t m = u.size();
  double tv = 0.0;
  for (std::size_t i = 0; i < m; ++i) tv += std::abs(u[(i + 1) % m] - u[i]);
  return tv;
}

struct WeakBvSum {
  std::vector<double> per_step;  // sum_i |f(u^n_{i+1}) - f(u^n_i)| for each n
  double aggregate = 0.0;        // sum_n dt * per_step[n]
};

inline WeakBvSum weak_bv_sum(const SchemeRun& run, const ConservationLaw& law) {
  WeakBvSum out;
  const std::size_t steps = run.history.size() - 1;
  out.per_step.reserve(steps);
  const int m = run.mesh->cell_count();
  for (std::size_t n = 0; n < steps; ++n) {
    const std::vector<double>& u = run.history[n].values;
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      s += std::abs(law.flux(u[(i + 1) % m]) - law.flux(u[i]));
    out.per_step.push_back(s);
    const double dt = run.history[n + 1].time - run.history[n].time;
    out.aggregate += dt * s;
  }
  return out;
}

// Largest positive part of the discrete Kruzhkov entropy residual for the
// entropy pair eta(u) = |u - kappa|, Q(a, b) = F(a v kappa, b v kappa)
// - F(a ^ kappa, b ^ kappa).  Monotone schemes keep this nonpositive up to
// roundoff; a violation signals a non-entropic (e.g. under-diffused) flux.
inline double entropy_residual(const SchemeRun& run, const NumericalFlux& flux,
                               double kappa) {
  const int m = run.mesh->cell_count();
  auto entropy_flux = [&](double a, double b) {
    return flux.rule(std::max(a, kappa), std::max(b, kappa)) -
           flux.rule(std::min(a, kappa), std::min(b, kappa));
  };
  double worst = 0.0;
  std::vector<double> q(m);
  for (std::size_t n = 0; n + 1 < run.history.size(); ++n) {
    const std::vector<double>& u = run.history[n].values;
    const std::vector<double>& v = run.history[n + 1].values;
    const double dt = run.history[n + 1].time - run.history[n].time;
    for (int i = 0; i < m; ++i) q[i] = entropy_flux(u[i], u[(i + 1) % m]);
    for (int i = 0; i < m; ++i) {
      const double rate =
          run.mesh->width(i) * (std::abs(v[i] - kappa) - std::abs(u[i] - kappa)) / dt;
      const double r = rate + q[i] - q[i == 0 ? m - 1 : i - 1];
      worst = std::max(worst, r);
    }
  }
  return worst;
}

// Conserved discrete integral sum_i |K_i| u_i and its relative drift.
inline double cell_total(const Mesh1D& mesh, const std::vector<double>& u) {
  double total = 0.0;
  for (int i = 0; i < mesh.cell_count(); ++i) total += mesh.width(i) * u[i];
  return total;
}

// Largest drift of the conserved cell total, relative to the discrete L1
// norm of the initial data so that zero-mean fields are still well scaled.
inline double conservation_drift(const SchemeRun& run) {
  const std::vector<double>& first = run.history.front().values;
  const double base = cell_total(*run.mesh, first);
  double l1 = 0.0;
  for (int i = 0; i < run.mesh->cell_count(); ++i)
    l1 += run.mesh->width(i) * std::abs(first[i]);
  const double scale = std::max(l1, 1e-30);
  double worst = 0.0;
  for (const CellField& field : run.history)
    worst = std::max(worst, std::abs(cell_total(*run.mesh, field.values) - base) / scale);
  return worst;
}

// Entropy solution of the Riemann problem for f(u) = u^2 in similarity form
// xi = x/t.  Decreasing data gives a shock with Rankine-Hugoniot speed
// (f(uL) - f(uR))/(uL - uR) = uL + uR; increasing data gives a rarefaction
// fan between the characteristic speeds f'(uL) = 2 uL and f'(uR) = 2 uR.
inline double burgers_riemann_value(double uL, double uR, double xi) {
  if (uL > uR) return xi < uL + uR ? uL : uR;
  if (xi <= 2.0 * uL) return uL;
  if (xi >= 2.0 * uR) return uR;
  return 0.5 * xi;
}

// Exact entropy solution for box data of height `top` > 0 on [x0, x1) and 0
// elsewhere: a rarefaction opens from x0 while the shock from x1 travels at
// speed `top`.  Valid until the fan head catches the shock, i.e. for
// t < (x1 - x0)/top.
inline double burgers_box_value(double x0, double x1, double top, double x, double t) {
  if (!(x0 < x1) || !(top > 0.0))
    throw std::invalid_argument("burgers_box_value: need x0 < x1 and top > 0");
  if (t <= 0.0) return (x >= x0 && x < x1) ? top : 0.0;
  const double fan_head = x0 + 2.0 * top * t;
  const double shock = x1 + top * t;
  if (fan_head > shock)
    throw std::invalid_argument("burgers_box_value: past the fan-shock interaction time");
  if (x <= x0 || x >= shock) return 0.0;
  if (x < fan_head) return std::min(top, (x - x0) / (2.0 * t));
  return top;
}

}  // namespace fvlab
