#pragma once

#include <stdexcept>
#include <vector>

#include "siltlab/errors.hpp"

namespace siltlab {

// Radial function sampled on a uniform grid r_i = i * (r[1] - r[0]).
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
};

// Positive decaying radial ground state of  u'' + u'/r - u + u^3 = 0,
// u'(0) = 0, u(inf) = 0, with its plane integrals:
//   l2_sq   = 2pi * int u(r)^2 r dr     (squared L2 norm)
//   grad_sq = 2pi * int u'(r)^2 r dr    (squared gradient norm)
//   l4      = 2pi * int u(r)^4 r dr     (fourth-power integral)
struct GroundState {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  double u0 = 0.0;
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  double l4 = 0.0;
  double tail_coeff = 0.0;  // u ~ tail_coeff * exp(-r)/sqrt(r) past the graft radius
};

// Constants derived from the ground state:
//   gamma_beta = l2_sq / 2,  A = gamma_beta^(-1/4),  M = A^4 / 2.
// gamma_beta * A^4 == 1 and M * gamma_beta == 1/2 hold by construction.
struct GNConstants {
  double A = 0.0;
  double gamma_beta = 0.0;
  double M = 0.0;
};

struct ShootingOptions {
  double r_max = 20.0;
  double grid_step = 0.01;
  double u0_lo = 1.0;
  double u0_hi = 4.0;
  double ode_rel_tol = 1e-11;
};

// Shooting with bisection on u(0): a trial overshoots when u crosses zero
// and undershoots when u' turns positive. Terminates when the u(0) bracket
// is narrower than tol. The unstable exp(+r) mode eventually contaminates
// any shot, so the returned profile grafts the analytic exp(-r)/sqrt(r)
// tail where u has decayed below 1e-4 of u(0).
GroundState solve_ground_state(double tol, const ShootingOptions& options = {});

GNConstants gn_constants(const GroundState& gs);

struct ObjectiveValue {
  double value = 0.0;     // (int f^4)^(1/2) - (1/2) int |grad f|^2
  double input_l2 = 0.0;  // squared L2 norm of the profile as given
};

// Evaluates the variational objective on a unit-L2 radial profile
// (renormalized internally if the squared norm strays from 1).
// By definition the value never exceeds M.
ObjectiveValue evaluate_objective(const RadialProfile& f);

struct GNCheck {
  double lhs = 0.0;  // ||f||_4
  double rhs = 0.0;  // A * sqrt(||grad f||_2) * sqrt(||f||_2)
  bool ok = false;
};

// Checks ||f||_4 <= A sqrt(||grad f||_2) sqrt(||f||_2) with the solved A.
GNCheck check_gn_inequality(const RadialProfile& f);
GNCheck check_gn_inequality(const RadialProfile& f, double A);

// Unit-L2 Gaussian profile of width sigma on [0, r_max], for trial sweeps.
RadialProfile gaussian_profile(double sigma, double r_max, double step);

// The ground state as a unit-L2 profile, rescaled by sigma: f(r) = sigma * Q(sigma r).
RadialProfile rescaled_ground_state(const GroundState& gs, double sigma);

}  // namespace siltlab
