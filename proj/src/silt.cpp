#include "siltlab/silt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace siltlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// H(v) = (v+eps)(log(v+eps) - 1), antiderivative building block for
// integrals of 1/(v+eps) over time rectangles and triangles.
double h_term(double v, double eps) {
  const double w = v + eps;
  return w * (std::log(w) - 1.0);
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

// Adaptive Simpson with absolute/relative tolerance and depth cap.
struct Simpson {
  const std::function<double(double)>& f;
  double rel_tol;
  double worst_local_error = 0.0;

  double recurse(double a, double b, double fa, double fm, double fb, double whole,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    const double scale = std::max(1e-300, std::abs(left + right));
    if (std::abs(err) <= rel_tol * scale || depth >= 48) {
      if (depth >= 48) worst_local_error = std::max(worst_local_error, std::abs(err) / scale);
      return left + right + err;
    }
    return recurse(a, m, fa, flm, fm, left, depth + 1) +
           recurse(m, b, fm, frm, fb, right, depth + 1);
  }

  double integrate(double a, double b) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, 0);
  }
};

}  // namespace

double centering_term(double T, MollifierScale eps) {
  if (T < 0.0) throw std::invalid_argument("centering_term: T must be nonnegative");
  const double e = eps.eps;
  return ((T + e) * std::log(T + e) - e * std::log(e) - T * std::log(e) - T) / kTwoPi;
}

CenteredSilt beta_hat(const PlanarPath& path, Interval I, MollifierScale eps) {
  validate_interval(path, I);
  CenteredSilt out;
  out.eps = eps.eps;
  out.T = path.dt * static_cast<double>(I.n_steps());
  out.raw = pairwise_self_sum(path, I, eps);
  out.centering = centering_term(out.T, eps);
  out.value = out.raw - out.centering;
  return out;
}

Decomposition decompose(const PlanarPath& path, std::span<const Interval> partition,
                        MollifierScale eps) {
  if (partition.empty()) {
    throw std::invalid_argument("decompose: partition must have at least one piece");
  }
  std::vector<Interval> pieces(partition.begin(), partition.end());
  std::sort(pieces.begin(), pieces.end(),
            [](Interval a, Interval b) { return a.lo_index < b.lo_index; });
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    if (pieces[k].hi_index != pieces[k + 1].lo_index) {
      throw std::invalid_argument("decompose: partition has a gap or overlap");
    }
  }
  for (const Interval& piece : pieces) {
    validate_interval(path, piece);
    if (piece.n_steps() == 0) {
      throw std::invalid_argument("decompose: empty partition piece");
    }
  }

  Decomposition out;
  out.pieces.reserve(pieces.size());
  for (const Interval& piece : pieces) {
    out.pieces.push_back(beta_hat(path, piece, eps));
  }
  double cross_sum = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const double a = pairwise_cross_sum(path, pieces[i], pieces[j], eps);
      out.cross_terms.push_back(a);
      cross_sum += a;
      out.cross_centering += expected_cross_mollified(
          path.dt * static_cast<double>(pieces[i].lo_index),
          path.dt * static_cast<double>(pieces[i].hi_index),
          path.dt * static_cast<double>(pieces[j].lo_index),
          path.dt * static_cast<double>(pieces[j].hi_index), eps);
    }
  }
  double piece_sum = 0.0;
  for (const CenteredSilt& piece : out.pieces) piece_sum += piece.value;
  out.total = piece_sum + cross_sum - out.cross_centering;
  return out;
}

double c_n_hat(const PlanarPath& path, std::size_t n, MollifierScale eps) {
  if (n == 0) throw std::invalid_argument("c_n_hat: n must be at least 1");
  const std::size_t steps_per_unit = grid_index(path, 1.0, "c_n_hat unit");
  const std::size_t last = grid_index(path, static_cast<double>(n), "c_n_hat horizon");
  (void)last;
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const Interval head{0, k * steps_per_unit};
    const Interval block{k * steps_per_unit, (k + 1) * steps_per_unit};
    sum += cross_ilt(path, head, block, eps);
  }
  return sum;
}

double expected_alpha_mollified(double s, double t, MollifierScale eps) {
  if (s < 0.0 || t < 0.0) {
    throw std::invalid_argument("expected_alpha_mollified: s, t must be nonnegative");
  }
  const double e = eps.eps;
  return (h_term(s + t, e) - h_term(s, e) - h_term(t, e) + h_term(0.0, e)) / kTwoPi;
}

double expected_cross_mollified(double a, double b, double c, double d,
                                MollifierScale eps) {
  if (a > b || c > d || b > c) {
    throw std::invalid_argument("expected_cross_mollified: need a <= b <= c <= d");
  }
  const double e = eps.eps;
  return (h_term(d - a, e) - h_term(d - b, e) - h_term(c - a, e) + h_term(c - b, e)) /
         kTwoPi;
}

double expected_alpha(double s, double t, Vec2 x0, Vec2 y0) {
  if (s < 0.0 || t < 0.0) {
    throw std::invalid_argument("expected_alpha: s, t must be nonnegative");
  }
  if (s == 0.0 || t == 0.0) return 0.0;
  const double d2 = squared_norm(Vec2{x0.x - y0.x, x0.y - y0.y});
  if (d2 == 0.0) {
    return (xlogx(s + t) - xlogx(s) - xlogx(t)) / kTwoPi;
  }
  // The plane integral collapses along r+u = v: the integrand depends on the
  // lag only, with trapezoidal overlap length min(v, s, t, s+t-v).
  const double lo = std::min(s, t);
  const double hi = std::max(s, t);
  const auto integrand = [&](double v) -> double {
    if (v <= 0.0) return 0.0;
    const double overlap = std::min({v, lo, s + t - v});
    return overlap * std::exp(-d2 / (2.0 * v)) / (kTwoPi * v);
  };
  const std::function<double(double)> f = integrand;
  Simpson quad{f, 1e-11};
  const double result =
      quad.integrate(0.0, lo) + quad.integrate(lo, hi) + quad.integrate(hi, s + t);
  if (quad.worst_local_error > 1e-8) {
    throw QuadratureError("expected_alpha: quadrature did not converge",
                          quad.worst_local_error);
  }
  return result;
}

}  // namespace siltlab
