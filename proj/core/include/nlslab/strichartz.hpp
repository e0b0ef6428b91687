#pragma once

#include <cstdint>
#include <utility>

#include "nlslab/grid.hpp"

namespace nlslab {

/// Axis-aligned rectangle [x0, x1] x [y0, y1] in the frequency plane.
struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(const Vec2& v) const { return v[0] >= x0 && v[0] <= x1 && v[1] >= y0 && v[1] <= y1; }
};

/// Two free waves with indicator data on r1 and r2, optionally restricted to
/// |cos angle(xi1, xi2)| <= theta.
struct BilinearSetup {
  Rect r1, r2;
  double theta = 0.1;
  bool angular = true;
};

/// Rectangles [N1 - tN2, N1 + tN2] x [-tN1, tN1] and [-tN2, tN2] x [N2 - tN1, N2 + tN1].
BilinearSetup extremizer_setup(double N1, double N2, double theta);

/// Angular measure (radians) of {phi : xi/2 + r e(phi) in r1, xi/2 - r e(phi) in r2,
/// angular constraint}. Every condition is an arc cos(phi - phi0) >= t; the
/// arcs are intersected exactly.
double arc_measure(const BilinearSetup& setup, const Vec2& xi, double r);

/// ||F||^2_{L^2_{t,x}} = (2 pi)^3 / 4 * int dxi int r A(xi, r)^2 dr, by
/// composite 8-point Gauss-Legendre with `panels` panels per axis over the
/// bounding box of the support.
double bilinear_norm_sq(const BilinearSetup& setup, int panels);

struct BilinearNorm {
  double norm_sq = 0.0;       // at 2 * panels
  double coarse_norm_sq = 0.0;  // at panels
  double rel_change = 0.0;
  /// ||F|| / (||phi1|| ||phi2||), with ||phi_j||^2 = area_j / (2 pi)^2.
  double ratio = 0.0;
};

/// Evaluates at `panels` and 2 * panels. Throws NumericalFailure when the
/// relative change exceeds `tolerance`.
BilinearNorm bilinear_norm(const BilinearSetup& setup, int panels, double tolerance = 0.01);

struct MonteCarloEstimate {
  double norm_sq = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Independent estimate of ||F||^2 from the six-dimensional integral over
/// (xi1, xi2, xi1') with xi2' = xi1 + xi2 - xi1' and a triangular mollified
/// delta of width `epsilon` on the phase difference.
MonteCarloEstimate bilinear_norm_monte_carlo(const BilinearSetup& setup, std::uint64_t samples, std::uint64_t seed,
                                             double epsilon);

}  // namespace nlslab
