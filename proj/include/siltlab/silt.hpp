#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "siltlab/estimators.hpp"
#include "siltlab/path.hpp"

namespace siltlab {

// Exact expectation of the mollified self-intersection double integral over
// the ordered-time triangle of [0, T]:
//   (1/2pi) [ (T+eps) log(T+eps) - eps log(eps) - T log(eps) - T ].
// Increasing in T, decreasing in eps, and diverges like -T log(eps)/(2pi).
double centering_term(double T, MollifierScale eps);

// Mollified, exactly centered self-intersection local time of one path
// piece. value = raw - centering, where centering is the analytic
// expectation of raw (no Monte Carlo centering, so E[value] -> 0 up to the
// trapezoid bias of the double sum).
struct CenteredSilt {
  double raw = 0.0;
  double centering = 0.0;
  double value = 0.0;
  double eps = 0.0;
  double T = 0.0;
};

// Depends on the path restricted to I only; shifting the piece to the
// origin of a fresh path yields the identical value.
CenteredSilt beta_hat(const PlanarPath& path, Interval I, MollifierScale eps);

// Sub-path repartition of beta_hat over a partition of I with pairwise
// disjoint interiors: raw quadrature splits exactly into per-piece
// triangles plus cross rectangles, and the analytic centerings split the
// same way, so `total` reconstructs beta_hat(I) to rounding error.
struct Decomposition {
  std::vector<CenteredSilt> pieces;
  std::vector<double> cross_terms;   // A(I_i; I_j) for i < j, row-major
  double cross_centering = 0.0;      // analytic expectation of the cross sum
  double total = 0.0;                // sum(pieces) + sum(cross) - cross_centering
};

Decomposition decompose(const PlanarPath& path, std::span<const Interval> partition,
                        MollifierScale eps);

// Sum over k = 1..n-1 of the cross intersection local time between [0,k]
// and [k,k+1] (times in whole units; the path grid must reach n).
double c_n_hat(const PlanarPath& path, std::size_t n, MollifierScale eps);

// Expectation of the mutual intersection local time of two motions started
// at x0 and y0, over [0,s] x [0,t], in the vanishing-bandwidth limit.
// Equals (1/2pi)[(s+t)log(s+t) - s log s - t log t] when x0 == y0 (with
// 0 log 0 := 0); otherwise strictly smaller, evaluated by adaptive
// quadrature of the Gaussian integrand.
double expected_alpha(double s, double t, Vec2 x0 = {}, Vec2 y0 = {});

// Finite-bandwidth analog for coincident starts:
//   (1/2pi)[H(s+t) - H(s) - H(t) + H(0)],  H(v) = (v+eps)(log(v+eps) - 1).
double expected_alpha_mollified(double s, double t, MollifierScale eps);

// Finite-bandwidth expectation of the cross sum over [a,b] x [c,d] with
// b <= c (time rectangle of one path).
double expected_cross_mollified(double a, double b, double c, double d,
                                MollifierScale eps);

// Raised when adaptive quadrature cannot reach the requested tolerance.
struct QuadratureError : std::runtime_error {
  double achieved_tol;
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tol(achieved) {}
};

}  // namespace siltlab
