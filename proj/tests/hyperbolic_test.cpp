#include "fvlab/hyperbolic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fvlab/rng.hpp"
#include "oracles.hpp"

using namespace fvlab;

namespace {

ConservationLaw cubic_law() {
  return {"cubic", [](double u) { return u * u * u - u; },
          [](double u) { return 3.0 * u * u - 1.0; }};
}

std::vector<double> step_data(const Mesh1D& mesh, double split, double lo, double hi) {
  std::vector<double> u(mesh.cell_count());
  for (int i = 0; i < mesh.cell_count(); ++i)
    u[i] = mesh.points[i] < split ? lo : hi;
  return u;
}

std::vector<double> sine_data(const Mesh1D& mesh) {
  std::vector<double> u(mesh.cell_count());
  for (int i = 0; i < mesh.cell_count(); ++i)
    u[i] = std::sin(2.0 * std::numbers::pi * mesh.points[i]);
  return u;
}

}  // namespace

TEST(GodunovValue, EqualStatesReturnTheFluxExactly) {
  const ConservationLaw burgers = burgers_law();
  for (double u : {-1.5, -0.3, 0.0, 0.7, 2.0})
    EXPECT_EQ(godunov_value(burgers, u, u), burgers.flux(u));
}

TEST(GodunovValue, PinnedCases) {
  const ConservationLaw burgers = burgers_law();
  EXPECT_EQ(godunov_value(burgers, -1.0, 1.0), 0.0);   // transonic min at 0
  EXPECT_DOUBLE_EQ(godunov_value(burgers, 1.0, -1.0), 1.0);
  EXPECT_DOUBLE_EQ(godunov_value(burgers, 0.5, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(godunov_value(burgers, -2.0, -1.0), 1.0);
  const ConservationLaw adv = linear_advection_law(2.0);
  EXPECT_EQ(godunov_value(adv, 0.3, 0.9), 0.6);  // increasing flux: always upwind
  EXPECT_EQ(godunov_value(adv, 0.9, 0.3), 1.8);
}

TEST(GodunovValue, MatchesDenseScanOnRandomPairs) {
  SplitMix64 rng(2026);
  for (const ConservationLaw& law : {burgers_law(), cubic_law()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double a = rng.next_double(-2.0, 2.0);
      const double b = rng.next_double(-2.0, 2.0);
      const double ref = oracle::brute_godunov(law.flux, a, b);
      EXPECT_NEAR(godunov_value(law, a, b), ref, 5e-7)
          << law.name << " uL=" << a << " uR=" << b;
    }
  }
}

TEST(NumericalFluxes, LaxFriedrichsValueAndMonotonicityFlag) {
  const ConservationLaw burgers = burgers_law();
  const NumericalFlux good = lax_friedrichs_flux(burgers, 2.0, -1.0, 1.0);
  EXPECT_DOUBLE_EQ(good.rule(-1.0, 1.0), -1.0);
  EXPECT_TRUE(good.monotone);
  const NumericalFlux broken = lax_friedrichs_flux(burgers, 0.2, -1.0, 1.0);
  EXPECT_FALSE(broken.monotone);
  EXPECT_THROW(lax_friedrichs_flux(burgers, -1.0, -1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(upwind_flux(0.0), std::invalid_argument);
}

TEST(NumericalFluxes, MonotonicityProbeSeparatesGoodFromBroken) {
  const ConservationLaw burgers = burgers_law();
  EXPECT_TRUE(verify_monotone(upwind_flux(1.5), -1.0, 1.0));
  EXPECT_TRUE(verify_monotone(godunov_flux(burgers, -1.0, 1.0), -1.0, 1.0));
  EXPECT_TRUE(verify_monotone(lax_friedrichs_flux(burgers, 2.0, -1.0, 1.0), -1.0, 1.0));
  EXPECT_FALSE(verify_monotone(lax_friedrichs_flux(burgers, 0.2, -1.0, 1.0), -1.0, 1.0));
}

TEST(ConservationScheme, UpwindFluxReproducesTheLinearScheme) {
  const int m = 64;
  MeshPtr mesh = share(uniform_mesh(0.0, 1.0, m));
  const double a = 1.3;
  const TimeGrid tg = TimeGrid::under_dt(0.3, 0.9 / (m * a));
  std::vector<double> u0 = sine_data(*mesh);
  const SchemeRun cons = run_conservation_scheme(linear_advection_law(a),
                                                 upwind_flux(a), mesh, tg, u0);
  const SchemeRun lin = run_upwind_scheme(SchemeKind::FvUpwind, a, mesh, tg, u0);
  EXPECT_EQ(cons.scheme_id, "fv-upwind-advection");
  for (std::size_t n = 0; n < cons.history.size(); ++n)
    for (int i = 0; i < m; ++i)
      EXPECT_NEAR(cons.history[n].values[i], lin.history[n].values[i], 1e-12);
}

TEST(ConservationScheme, CflViolationIsRefused) {
  MeshPtr mesh = share(uniform_mesh(0.0, 1.0, 16));
  const TimeGrid tg{1.0, 4, 0.25};
  try {
    run_conservation_scheme(burgers_law(), godunov_flux(burgers_law(), -1.0, 1.0),
                            mesh, tg, std::vector<double>(16, 0.5));
    FAIL() << "expected CflError";
  } catch (const CflError& e) {
    EXPECT_GT(e.ratio(), 1.0);
  }
}

TEST(ConservationScheme, DiscreteIntegralIsConserved) {
  const ConservationLaw burgers = burgers_law();
  for (std::uint64_t seed : {3u, 4u}) {
    MeshPtr mesh = share(random_mesh(0.0, 1.0, 80, 3.0, seed));
    double min_width = mesh->width(0);
    for (int i = 1; i < mesh->cell_count(); ++i)
      min_width = std::min(min_width, mesh->width(i));
    const NumericalFlux flux = godunov_flux(burgers, -1.0, 1.0);
    const TimeGrid tg =
        TimeGrid::under_dt(0.3, 0.9 * min_width / flux.lipschitz_bound);
    const SchemeRun run =
        run_conservation_scheme(burgers, flux, mesh, tg, sine_data(*mesh));
    EXPECT_LE(conservation_drift(run), 1e-13);
  }
}

TEST(ConservationScheme, MonotoneRunsAreTvdAndRangePreserving) {
  const ConservationLaw burgers = burgers_law();
  const int m = 128;
  MeshPtr mesh = share(uniform_mesh(0.0, 1.0, m));
  std::vector<double> u0(m);
  SplitMix64 rng(55);
  for (double& v : u0) v = rng.next_double(-1.0, 1.0);
  const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
  const double lo0 = *lo, hi0 = *hi;
  const TimeGrid tg = TimeGrid::under_dt(0.2, 0.9 / (m * 2.0));
  for (const NumericalFlux& flux : {godunov_flux(burgers, -1.0, 1.0),
                                    lax_friedrichs_flux(burgers, 2.0, -1.0, 1.0)}) {
    const SchemeRun run = run_conservation_scheme(burgers, flux, mesh, tg, u0);
    double tv_prev = total_variation(run.history.front().values);
    for (std::size_t n = 1; n < run.history.size(); ++n) {
      const double tv = total_variation(run.history[n].values);
      EXPECT_LE(tv, tv_prev * (1.0 + 1e-12)) << flux.name << " step " << n;
      tv_prev = tv;
      for (double v : run.history[n].values) {
        EXPECT_GE(v, lo0 - 1e-14) << flux.name;
        EXPECT_LE(v, hi0 + 1e-14) << flux.name;
      }
    }
  }
}

TEST(WeakBvSum, BoxDataAggregateIsResolutionStable) {
  // the jump sum tracks the variation of f along the profile: about one
  // top^2 from the fan plus one from the shock, nearly independent of h,
  // which is far below the 1/sqrt(h) worst-case budget
  const ConservationLaw burgers = burgers_law();
  const double T = 0.25;
  std::vector<double> aggregates, scaled;
  for (int m : {64, 128, 256}) {
    MeshPtr mesh = share(uniform_mesh(0.0, 1.0, m));
    const NumericalFlux flux = godunov_flux(burgers, 0.0, 1.0);
    const TimeGrid tg = TimeGrid::under_dt(T, 0.9 / (m * flux.lipschitz_bound));
    std::vector<double> box(m);
    for (int i = 0; i < m; ++i) {
      const double x = mesh->points[i];
      box[i] = (x >= 0.2 && x < 0.6) ? 1.0 : 0.0;
    }
    const SchemeRun boxed = run_conservation_scheme(burgers, flux, mesh, tg, box);
    const WeakBvSum sum = weak_bv_sum(boxed, burgers);
    EXPECT_EQ(sum.per_step.size(), boxed.history.size() - 1);
    aggregates.push_back(sum.aggregate);
    scaled.push_back(sum.aggregate * std::sqrt(1.0 / m));
  }
  for (double a : aggregates) {
    EXPECT_GE(a, 0.25);
    EXPECT_LE(a, 1.0);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  EXPECT_LE(*hi, 3.0 * *lo);
}

TEST(EntropyResidual, MonotoneSchemesStayNonpositive) {
  const ConservationLaw burgers = burgers_law();
  const int m = 64;
  MeshPtr mesh = share(uniform_mesh(0.0, 1.0, m));
  const TimeGrid tg = TimeGrid::under_dt(0.3, 0.9 / (m * 2.0));
  const std::vector<double> u0 = sine_data(*mesh);
  for (const NumericalFlux& flux : {godunov_flux(burgers, -1.0, 1.0),
                                    lax_friedrichs_flux(burgers, 2.0, -1.0, 1.0)}) {
    const SchemeRun run = run_conservation_scheme(burgers, flux, mesh, tg, u0);
    for (double kappa : {-0.5, 0.0, 0.5})
      EXPECT_LE(entropy_residual(run, flux, kappa), 1e-10)
          << flux.name << " kappa=" << kappa;
  }
}

TEST(EntropyResidual, UnderDiffusedFluxIsCaught) {
  const ConservationLaw burgers = burgers_law();
  const int m = 64;
  MeshPtr mesh = share(uniform_mesh(0.0, 1.0, m));
  const NumericalFlux broken = lax_friedrichs_flux(burgers, 0.2, -1.0, 1.0);
  const TimeGrid tg = TimeGrid::under_dt(10.0 * 0.9 / (m * 2.0), 0.9 / (m * 2.0));
  const SchemeRun run =
      run_conservation_scheme(burgers, broken, mesh, tg, sine_data(*mesh));
  double worst = 0.0;
  for (double kappa : {-0.5, 0.0, 0.5})
    worst = std::max(worst, entropy_residual(run, broken, kappa));
  EXPECT_GE(worst, 1e-6);
}

TEST(BurgersRiemann, ShockAndRarefactionBranches) {
  // decreasing data: shock moving at uL + uR
  EXPECT_EQ(burgers_riemann_value(1.0, 0.0, 0.99), 1.0);
  EXPECT_EQ(burgers_riemann_value(1.0, 0.0, 1.01), 0.0);
  // increasing data: fan between 2 uL and 2 uR with value xi/2
  EXPECT_EQ(burgers_riemann_value(-1.0, 1.0, -2.5), -1.0);
  EXPECT_EQ(burgers_riemann_value(-1.0, 1.0, 2.5), 1.0);
  EXPECT_DOUBLE_EQ(burgers_riemann_value(-1.0, 1.0, 0.6), 0.3);
}

TEST(BurgersRiemann, ShockSpeedSatisfiesTheJumpRelation) {
  SplitMix64 rng(61);
  const ConservationLaw burgers = burgers_law();
  for (int trial = 0; trial < 50; ++trial) {
    double uR = rng.next_double(-2.0, 2.0);
    double uL = uR + rng.next_double(0.1, 2.0);  // decreasing jump
    const double s = uL + uR;
    EXPECT_NEAR(burgers.flux(uL) - burgers.flux(uR), s * (uL - uR), 1e-12);
    // the solution jumps exactly at xi = s
    EXPECT_EQ(burgers_riemann_value(uL, uR, s - 1e-9), uL);
    EXPECT_EQ(burgers_riemann_value(uL, uR, s + 1e-9), uR);
  }
}

TEST(BurgersRiemann, FanSatisfiesTheEquationPointwise) {
  // u = xi / 2 inside the fan; check u_t + (u^2)_x = 0 by central differences
  const double d = 1e-4;
  for (double x : {-0.2, 0.1, 0.5}) {
    for (double t : {0.5, 1.0}) {
      auto u = [](double xx, double tt) {
        return burgers_riemann_value(-1.0, 1.0, xx / tt);
      };
      const double ut = (u(x, t + d) - u(x, t - d)) / (2.0 * d);
      auto f = [&u](double xx, double tt) {
        const double v = u(xx, tt);
        return v * v;
      };
      const double fx = (f(x + d, t) - f(x - d, t)) / (2.0 * d);
      EXPECT_NEAR(ut + fx, 0.0, 1e-6) << "x=" << x << " t=" << t;
    }
  }
}

TEST(BurgersBox, InitialProfileAndArgumentChecks) {
  EXPECT_EQ(burgers_box_value(0.1, 0.35, 1.0, 0.2, 0.0), 1.0);
  EXPECT_EQ(burgers_box_value(0.1, 0.35, 1.0, 0.05, 0.0), 0.0);
  EXPECT_EQ(burgers_box_value(0.1, 0.35, 1.0, 0.35, 0.0), 0.0);
  EXPECT_THROW(burgers_box_value(0.5, 0.2, 1.0, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(burgers_box_value(0.1, 0.35, 0.0, 0.0, 0.1), std::invalid_argument);
  // fan head catches the shock at t = (x1 - x0) / top
  EXPECT_THROW(burgers_box_value(0.0, 0.1, 1.0, 0.5, 0.2), std::invalid_argument);
  EXPECT_NO_THROW(burgers_box_value(0.0, 0.1, 1.0, 0.5, 0.09));
}

TEST(BurgersBox, MassIsConservedAndShockSitsAtTopSpeed) {
  const double x0 = 0.1, x1 = 0.35, top = 1.0;
  for (double t : {0.05, 0.1, 0.2}) {
    auto u = [&](double x) { return burgers_box_value(x0, x1, top, x, t); };
    const double fan_head = x0 + 2.0 * top * t;
    const double shock = x1 + top * t;
    // piecewise Simpson: exact on the linear fan and the flat plateau
    const double mass = oracle::simpson(u, x0, fan_head, 200) +
                        oracle::simpson(u, fan_head, shock - 1e-13, 200);
    EXPECT_NEAR(mass, top * (x1 - x0), 1e-10) << "t=" << t;
    EXPECT_EQ(u(shock - 1e-6), top);
    EXPECT_EQ(u(shock + 1e-6), 0.0);
  }
}

TEST(BurgersBox, MatchesTheRiemannFansNearEachEdge) {
  // before the fan meets the shock the box solution is the pointwise minimum
  // of the two single-jump solutions anchored at x0 and x1
  const double x0 = 0.1, x1 = 0.35, top = 1.0, t = 0.1;
  for (double x : {0.05, 0.12, 0.2, 0.33, 0.42, 0.5}) {
    const double from_box = burgers_box_value(x0, x1, top, x, t);
    const double left = burgers_riemann_value(0.0, top, (x - x0) / t);
    const double right = burgers_riemann_value(top, 0.0, (x - x1) / t);
    EXPECT_NEAR(from_box, std::min(left, right), 1e-12) << "x=" << x;
  }
}

TEST(GodunovConvergence, TransonicRarefactionWithStationaryShock) {
  // periodic step data: rarefaction through the sonic point at x = 0.5 and a
  // standing shock at the wrap; Godunov resolves both without an entropy
  // glitch and the L1 error shrinks steadily under refinement
  const ConservationLaw burgers = burgers_law();
  const double T = 0.2;
  std::vector<double> errors;
  for (int m : {64, 128, 256}) {
    MeshPtr mesh = share(uniform_mesh(0.0, 1.0, m));
    const NumericalFlux flux = godunov_flux(burgers, -0.5, 0.5);
    const TimeGrid tg = TimeGrid::under_dt(T, 0.9 / (m * flux.lipschitz_bound));
    const SchemeRun run = run_conservation_scheme(
        burgers, flux, mesh, tg, step_data(*mesh, 0.5, -0.5, 0.5));
    const std::vector<double>& u = run.history.back().values;
    double err = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = mesh->points[i];
      const double exact = std::clamp((x - 0.5) / (2.0 * T), -0.5, 0.5);
      err += mesh->width(i) * std::abs(u[i] - exact);
    }
    errors.push_back(err);
  }
  EXPECT_LE(errors[1], 0.75 * errors[0]);
  EXPECT_LE(errors[2], 0.75 * errors[1]);
}
