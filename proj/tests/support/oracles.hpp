#pragma once

// Test-side oracles, independent of the library's quadrature paths.
//
// The exact discrete means below use only E p_eps(X_j - X_i) = p_{(j-i)dt+eps}(0)
// and E p_eps(X_i - Y_j) = p_{(i+j)dt+eps}(0) (Gaussian semigroup), applied
// term by term to the trapezoid sums. They let Monte Carlo means be checked
// at plain stderr tolerances with no quadrature slack.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracles {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double trap_w(std::size_t i, std::size_t lo, std::size_t hi) {
  return (i == lo || i == hi) ? 0.5 : 1.0;
}

// Exact mean of the triangular self sum over n steps (diagonal half-weighted).
inline double exact_mean_pairwise_self(std::size_t n, double dt, double eps) {
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      sum += trap_w(i, 0, n) * trap_w(j, 0, n) /
             (kTwoPi * (static_cast<double>(j - i) * dt + eps));
    }
  }
  double diag = 0.0;
  for (std::size_t i = 0; i <= n; ++i) diag += trap_w(i, 0, n) * trap_w(i, 0, n);
  sum += 0.5 * diag / (kTwoPi * eps);
  return sum * dt * dt;
}

// Exact mean of the rectangle cross sum over [a,b] x [c,d] grid indices.
inline double exact_mean_pairwise_cross(std::size_t a, std::size_t b, std::size_t c,
                                        std::size_t d, double dt, double eps) {
  double sum = 0.0;
  for (std::size_t i = a; i <= b; ++i) {
    for (std::size_t j = c; j <= d; ++j) {
      const double lag = (j >= i ? static_cast<double>(j - i)
                                 : -static_cast<double>(i - j));
      sum += trap_w(i, a, b) * trap_w(j, c, d) / (kTwoPi * (lag * dt + eps));
    }
  }
  return sum * dt * dt;
}

// Exact mean of alpha_hat on an m x n grid (two independent motions from 0).
inline double exact_mean_alpha_hat(std::size_t m, std::size_t n, double dt, double eps) {
  if (m == 0 || n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      sum += trap_w(i, 0, m) * trap_w(j, 0, n) /
             (kTwoPi * (static_cast<double>(i + j) * dt + eps));
    }
  }
  return sum * dt * dt;
}

// Adaptive-free Simpson on a fixed grid; good enough for smooth oracles.
template <typename F>
double simpson(F f, double a, double b, std::size_t n_intervals) {
  if (n_intervals % 2 == 1) ++n_intervals;
  const double h = (b - a) / static_cast<double>(n_intervals);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n_intervals; ++i) {
    sum += f(a + static_cast<double>(i) * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Continuum centering integral via the lag variable:
//   int int_{0<=u<=s<=T} 1/(2pi (s-u+eps)) = int_0^T (T-v)/(2pi (v+eps)) dv.
inline double centering_by_quadrature(double T, double eps) {
  return simpson(
      [&](double v) { return (T - v) / (kTwoPi * (v + eps)); }, 0.0, T,
      200000);
}

// Continuum mean of alpha over [0,s] x [0,t] at bandwidth eps, by quadrature
// in the lag variable v = r + u with overlap min(v, s, t, s+t-v).
inline double alpha_mean_by_quadrature(double s, double t, double eps) {
  const double lo = std::min(s, t);
  auto f = [&](double v) {
    const double overlap = std::min(std::min(v, lo), s + t - v);
    return overlap / (kTwoPi * (v + eps));
  };
  return simpson(f, 0.0, lo, 40000) + simpson(f, lo, std::max(s, t), 40000) +
         simpson(f, std::max(s, t), s + t, 40000);
}

// Mean occupation of B(0, r) up to time 1 for a motion started at the
// center: int_0^1 (1 - exp(-r^2/(2s))) ds, by quadrature.
inline double mean_ball_occupation(double r) {
  return simpson(
      [&](double s) { return s > 0.0 ? 1.0 - std::exp(-r * r / (2.0 * s)) : 1.0; },
      1e-12, 1.0, 200000);
}

struct MeanStd {
  double mean = 0.0;
  double std_error = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) /
                            static_cast<double>(v.size()));
  return out;
}

}  // namespace oracles
