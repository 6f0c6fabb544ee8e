#pragma once

#include <cstddef>
#include <vector>

#include "siltlab/path.hpp"

namespace siltlab {

// Heat-kernel bandwidth, in time units. This is the mollifier scale shared
// by every smoothed estimator; keep eps >= 4*dt or the double sums pick up
// visible quadrature bias (the batch front end enforces that ratio).
struct MollifierScale {
  double eps;
  explicit MollifierScale(double e);
};

// Gaussian density of a planar increment run for time eps:
// (1/(2*pi*eps)) * exp(-|x|^2 / (2*eps)).
double heat_kernel(MollifierScale eps, Vec2 x);

// --- shared quadrature kernels -------------------------------------------
//
// All double integrals below use trapezoidal weights on the uniform grid
// (half weights at interval endpoints). Triangular domains carry the
// diagonal at half weight, so twice the triangle sum reproduces the full
// square sum exactly; that convention is what makes the sub-path
// repartition identity and the occupation-density identity exact at the
// discrete level, not just in the limit.
//
// Sums are accumulated over fixed-size index tiles folded in row-major tile
// order, so the arithmetic order (and hence the result, bitwise) does not
// depend on how work is scheduled.

// Triangle sum over lo <= i <= j <= hi of w_i w_j p_eps(X_j - X_i),
// diagonal at half weight. Returns 0 for an empty interval.
double pairwise_self_sum(const PlanarPath& path, Interval I, MollifierScale eps);

// Rectangle sum over i in I, j in J of w_i w_j p_eps(X_j - X_i).
double pairwise_cross_sum(const PlanarPath& path, Interval I, Interval J,
                          MollifierScale eps);

// Mutual intersection local time of two independent motions, mollified at
// eps, over [0,s] x [0,t]. s and t must align to the shared grid.
double alpha_hat(const PlanarPath& x_path, const PlanarPath& y_path,
                 MollifierScale eps, double s, double t);

// Intersection local time between two pieces of one path whose interiors
// are disjoint. Exactly symmetric in (I, J).
double cross_ilt(const PlanarPath& path, Interval I, Interval J, MollifierScale eps);

// --- occupation density ----------------------------------------------------

struct GridSpec {
  double cell_size = 0.0;
  double xmin = 0.0, xmax = 0.0;
  double ymin = 0.0, ymax = 0.0;

  // Smallest grid covering the path range plus a margin of 5*sqrt(eps)
  // (the kernel is truncated at that radius, so nothing is clipped).
  static GridSpec cover(const PlanarPath& path, MollifierScale eps, double cell_size);
};

// Cell-center samples of L(t, x, eps) = integral over [0,t] of
// p_eps(X_s - x) ds. Total mass sum(L)*cell_area approximates t.
struct OccupationGrid {
  GridSpec spec;
  std::size_t nx = 0, ny = 0;
  std::vector<double> values;  // row-major, values[j*nx + i]

  double cell_area() const { return spec.cell_size * spec.cell_size; }
  Vec2 center(std::size_t i, std::size_t j) const;
  double total_mass() const;
  double l2_integral() const;  // integral of L^2 over the plane
};

OccupationGrid occupation_density(const PlanarPath& path, MollifierScale eps,
                                  const GridSpec& spec);

// Both sides of the occupation identity on [0, T]:
//   pairwise sum at bandwidth 2*eps over the ordered-time triangle
//   vs  (1/2) * integral of L(T, x, eps)^2 dx.
struct IdentityCheck {
  double pairwise = 0.0;
  double half_l2 = 0.0;
  double rel_gap = 0.0;
};

// cell_size <= 0 selects the default sqrt(eps)/4.
IdentityCheck identity_check(const PlanarPath& path, MollifierScale eps, double T,
                             double cell_size = 0.0);

// Index of the grid point at time t; throws if t is not grid-aligned.
std::size_t grid_index(const PlanarPath& path, double t, const char* what);

}  // namespace siltlab
