#pragma once
// 1D meshes: strictly increasing face positions plus one collocation point
// per cell.  Transport and conservation-law schemes treat the interval
// [faces.front(), faces.back()) periodically; the heat solver uses the two
// end faces as homogeneous Dirichlet boundary points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvlab/profiles.hpp"
#include "fvlab/rng.hpp"

namespace fvlab {

// Thrown when an explicit scheme is asked to run with a time step that
// violates its CFL restriction.  `ratio()` is the offending dt-to-limit ratio.
class CflError : public std::runtime_error {
public:
  CflError(const std::string& what, double ratio)
      : std::runtime_error(what), ratio_(ratio) {}
  double ratio() const { return ratio_; }

private:
  double ratio_;
};

struct Mesh1D {
  std::vector<double> faces;   // size m+1, strictly increasing
  std::vector<double> points;  // size m, points[i] strictly inside cell i

  int cell_count() const { return static_cast<int>(points.size()); }
  double period() const { return faces.back() - faces.front(); }
  double width(int i) const { return faces[i + 1] - faces[i]; }

  void validate() const {
    if (points.empty() || faces.size() != points.size() + 1)
      throw std::invalid_argument("Mesh1D: need m points and m+1 faces");
    for (std::size_t i = 0; i + 1 < faces.size(); ++i)
      if (!(faces[i] < faces[i + 1]))
        throw std::invalid_argument("Mesh1D: faces must be strictly increasing");
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!(faces[i] < points[i] && points[i] < faces[i + 1]))
        throw std::invalid_argument("Mesh1D: each point must lie strictly inside its cell");
  }
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

inline MeshPtr share(Mesh1D mesh) { return std::make_shared<const Mesh1D>(std::move(mesh)); }

// Per-cell spacing data, all with periodic wraparound:
//   h_half[i]   = x_i - x_{i-1}        (point spacing across face i)
//   h_center[i] = (x_{i+1} - x_{i-1})/2 (centered spacing around point i)
//   widths[i]   = faces[i+1] - faces[i]
struct Spacings {
  std::vector<double> h_half, h_center, widths;
};

inline Spacings spacings(const Mesh1D& mesh) {
  const int m = mesh.cell_count();
  const double period = mesh.period();
  Spacings s;
  s.h_half.resize(m);
  s.h_center.resize(m);
  s.widths.resize(m);
  for (int i = 0; i < m; ++i) {
    const double prev = (i == 0) ? mesh.points[m - 1] - period : mesh.points[i - 1];
    const double next = (i == m - 1) ? mesh.points[0] + period : mesh.points[i + 1];
    s.h_half[i] = mesh.points[i] - prev;
    s.h_center[i] = 0.5 * (next - prev);
    s.widths[i] = mesh.width(i);
  }
  return s;
}

// m equal cells on [a, b], points at cell midpoints.
inline Mesh1D uniform_mesh(double a, double b, int m) {
  if (!(a < b)) throw std::invalid_argument("uniform_mesh: need a < b");
  if (m < 1) throw std::invalid_argument("uniform_mesh: need at least one cell");
  Mesh1D mesh;
  mesh.faces.resize(m + 1);
  mesh.points.resize(m);
  const double len = b - a;
  mesh.faces[0] = a;
  mesh.faces[m] = b;
  for (int i = 1; i < m; ++i) mesh.faces[i] = a + len * i / m;
  for (int i = 0; i < m; ++i) mesh.points[i] = 0.5 * (mesh.faces[i] + mesh.faces[i + 1]);
  mesh.validate();
  return mesh;
}

// Points with alternating spacings h/2, h, h/2, h, ... starting at x_0 = a;
// one short+long pair spans 3h/2, so (b - a) must be an integer multiple of
// 3h/2.  Faces sit at point midpoints (periodic closure), which makes every
// centered spacing equal to 3h/4 even though the point spacings alternate.
inline Mesh1D alternating_mesh(double a, double b, double h) {
  if (!(a < b)) throw std::invalid_argument("alternating_mesh: need a < b");
  if (!(h > 0)) throw std::invalid_argument("alternating_mesh: need h > 0");
  const double pair = 1.5 * h;
  const double ratio = (b - a) / pair;
  const auto pairs = static_cast<long>(std::llround(ratio));
  if (pairs < 1 || std::abs(ratio - static_cast<double>(pairs)) > 1e-9 * ratio)
    throw std::invalid_argument(
        "alternating_mesh: (b - a) must be an integer multiple of 3h/2");
  const int m = static_cast<int>(2 * pairs);
  Mesh1D mesh;
  mesh.points.resize(m);
  for (long k = 0; k < pairs; ++k) {
    mesh.points[2 * k] = a + pair * static_cast<double>(k);
    mesh.points[2 * k + 1] = a + pair * static_cast<double>(k) + 0.5 * h;
  }
  mesh.faces.resize(m + 1);
  mesh.faces[0] = a - 0.5 * h;  // midpoint of the wrapped pair (x_{m-1} - period, x_0)
  for (int i = 1; i < m; ++i) mesh.faces[i] = 0.5 * (mesh.points[i - 1] + mesh.points[i]);
  mesh.faces[m] = mesh.faces[0] + (b - a);
  mesh.validate();
  return mesh;
}

// m cells on [a, b] with pseudo-random widths, max/min width <= ratio_bound.
// Widths are drawn from splitmix64(seed) in [1, ratio_bound] and rescaled, so
// the mesh is reproducible from the seed alone.  Points at cell midpoints.
inline Mesh1D random_mesh(double a, double b, int m, double ratio_bound,
                          std::uint64_t seed) {
  if (!(a < b)) throw std::invalid_argument("random_mesh: need a < b");
  if (m < 1) throw std::invalid_argument("random_mesh: need at least one cell");
  if (!(ratio_bound >= 1.0))
    throw std::invalid_argument("random_mesh: need ratio_bound >= 1");
  SplitMix64 rng(seed);
  std::vector<double> w(m);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    w[i] = 1.0 + (ratio_bound - 1.0) * rng.next_double();
    sum += w[i];
  }
  Mesh1D mesh;
  mesh.faces.resize(m + 1);
  mesh.points.resize(m);
  const double scale = (b - a) / sum;
  mesh.faces[0] = a;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    acc += w[i];
    mesh.faces[i + 1] = a + scale * acc;
  }
  mesh.faces[m] = b;
  for (int i = 0; i < m; ++i) mesh.points[i] = 0.5 * (mesh.faces[i] + mesh.faces[i + 1]);
  mesh.validate();
  return mesh;
}

// Mesh whose points are the pairwise midpoints of the input points and whose
// faces are the input points themselves (periodic closure at the end).  Its
// point spacings reproduce the centered spacings of the input mesh.
inline Mesh1D midpoint_shift(const Mesh1D& mesh) {
  const int m = mesh.cell_count();
  const double period = mesh.period();
  Mesh1D shifted;
  shifted.points.resize(m);
  shifted.faces.resize(m + 1);
  for (int i = 0; i < m; ++i) {
    const double next = (i == m - 1) ? mesh.points[0] + period : mesh.points[i + 1];
    shifted.points[i] = 0.5 * (mesh.points[i] + next);
    shifted.faces[i] = mesh.points[i];
  }
  shifted.faces[m] = mesh.points[0] + period;
  shifted.validate();
  return shifted;
}

// Uniform time grid over [0, T]; dt = T / steps so steps * dt reproduces T up
// to one rounding.
struct TimeGrid {
  double final_time = 0.0;
  int steps = 0;
  double dt = 0.0;

  static TimeGrid with_steps(double T, int n) {
    if (!(T > 0)) throw std::invalid_argument("TimeGrid: need T > 0");
    if (n < 2) throw std::invalid_argument("TimeGrid: need at least 2 steps");
    return {T, n, T / n};
  }

  // smallest admissible step count with dt <= dt_max
  static TimeGrid under_dt(double T, double dt_max) {
    if (!(T > 0) || !(dt_max > 0))
      throw std::invalid_argument("TimeGrid: need T > 0 and dt_max > 0");
    int n = std::max(2, static_cast<int>(std::ceil(T / dt_max)));
    while (T / n > dt_max) ++n;
    return {T, n, T / n};
  }
};

// Scalar unknowns attached to the cells of a mesh at one time level.
struct CellField {
  MeshPtr mesh;
  std::vector<double> values;
  double time = 0.0;
};

inline std::vector<double> sample_at_points(const SmoothProfile& profile,
                                            const Mesh1D& mesh) {
  std::vector<double> u(mesh.cell_count());
  for (int i = 0; i < mesh.cell_count(); ++i) u[i] = profile.value(mesh.points[i]);
  return u;
}

}  // namespace fvlab
