#include "siltlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace siltlab {

namespace {

constexpr std::size_t kTile = 256;

inline double trapezoid_weight(std::size_t i, std::size_t lo, std::size_t hi) {
  return (i == lo || i == hi) ? 0.5 : 1.0;
}

struct Kernel {
  double inv_two_eps;
  double norm;
  explicit Kernel(double eps)
      : inv_two_eps(1.0 / (2.0 * eps)), norm(1.0 / (2.0 * std::numbers::pi * eps)) {}
  double operator()(Vec2 a, Vec2 b) const {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return norm * std::exp(-(dx * dx + dy * dy) * inv_two_eps);
  }
};

}  // namespace

MollifierScale::MollifierScale(double e) : eps(e) {
  if (!(e > 0.0) || !std::isfinite(e)) {
    throw std::invalid_argument("MollifierScale: eps must be positive and finite");
  }
}

double heat_kernel(MollifierScale eps, Vec2 x) {
  return Kernel(eps.eps)(x, Vec2{0.0, 0.0});
}

double pairwise_self_sum(const PlanarPath& path, Interval I, MollifierScale eps) {
  validate_interval(path, I);
  const std::size_t lo = I.lo_index, hi = I.hi_index;
  if (hi == lo) return 0.0;
  const Kernel kernel(eps.eps);
  const Vec2* pos = path.positions.data();

  const std::size_t n_points = hi - lo + 1;
  const std::size_t n_tiles = (n_points + kTile - 1) / kTile;
  double total = 0.0;
  // Strict upper triangle, tiles folded in row-major order.
  for (std::size_t ta = 0; ta < n_tiles; ++ta) {
    const std::size_t a0 = lo + ta * kTile;
    const std::size_t a1 = std::min(hi, a0 + kTile - 1);
    for (std::size_t tb = ta; tb < n_tiles; ++tb) {
      const std::size_t b0 = lo + tb * kTile;
      const std::size_t b1 = std::min(hi, b0 + kTile - 1);
      double tile = 0.0;
      for (std::size_t i = a0; i <= a1; ++i) {
        const double wi = trapezoid_weight(i, lo, hi);
        const std::size_t j_begin = std::max(b0, i + 1);
        for (std::size_t j = j_begin; j <= b1; ++j) {
          tile += wi * trapezoid_weight(j, lo, hi) * kernel(pos[i], pos[j]);
        }
      }
      total += tile;
    }
  }
  // Diagonal carries half weight; sum of squared trapezoid weights over the
  // interval is (n_points - 1.5) since the two ends are 1/4 each.
  const double diag_weight_sq = static_cast<double>(n_points) - 1.5;
  total += 0.5 * diag_weight_sq * kernel.norm;
  return total * path.dt * path.dt;
}

double pairwise_cross_sum(const PlanarPath& path, Interval I, Interval J,
                          MollifierScale eps) {
  validate_interval(path, I);
  validate_interval(path, J);
  const Kernel kernel(eps.eps);
  const Vec2* pos = path.positions.data();
  const std::size_t ni = I.hi_index - I.lo_index + 1;
  const std::size_t nj = J.hi_index - J.lo_index + 1;
  const std::size_t ti_count = (ni + kTile - 1) / kTile;
  const std::size_t tj_count = (nj + kTile - 1) / kTile;
  double total = 0.0;
  for (std::size_t ta = 0; ta < ti_count; ++ta) {
    const std::size_t a0 = I.lo_index + ta * kTile;
    const std::size_t a1 = std::min(I.hi_index, a0 + kTile - 1);
    for (std::size_t tb = 0; tb < tj_count; ++tb) {
      const std::size_t b0 = J.lo_index + tb * kTile;
      const std::size_t b1 = std::min(J.hi_index, b0 + kTile - 1);
      double tile = 0.0;
      for (std::size_t i = a0; i <= a1; ++i) {
        const double wi = trapezoid_weight(i, I.lo_index, I.hi_index);
        for (std::size_t j = b0; j <= b1; ++j) {
          tile += wi * trapezoid_weight(j, J.lo_index, J.hi_index) * kernel(pos[i], pos[j]);
        }
      }
      total += tile;
    }
  }
  return total * path.dt * path.dt;
}

std::size_t grid_index(const PlanarPath& path, double t, const char* what) {
  if (t < 0.0) {
    throw std::invalid_argument(std::string(what) + ": time must be nonnegative");
  }
  const double steps = t / path.dt;
  const auto idx = static_cast<std::size_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(idx)) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument(std::string(what) + ": time " + std::to_string(t) +
                                " does not align to grid of step " + std::to_string(path.dt));
  }
  if (idx > path.n_steps()) {
    throw std::out_of_range(std::string(what) + ": time " + std::to_string(t) +
                            " beyond path horizon " + std::to_string(path.horizon()));
  }
  return idx;
}

double alpha_hat(const PlanarPath& x_path, const PlanarPath& y_path,
                 MollifierScale eps, double s, double t) {
  if (x_path.dt != y_path.dt) {
    throw std::invalid_argument("alpha_hat: paths must share the same dt");
  }
  const std::size_t m = grid_index(x_path, s, "alpha_hat s");
  const std::size_t n = grid_index(y_path, t, "alpha_hat t");
  if (m == 0 || n == 0) return 0.0;

  const Kernel kernel(eps.eps);
  const Vec2* xs = x_path.positions.data();
  const Vec2* ys = y_path.positions.data();
  const std::size_t ti_count = (m + kTile) / kTile;
  const std::size_t tj_count = (n + kTile) / kTile;
  double total = 0.0;
  for (std::size_t ta = 0; ta < ti_count; ++ta) {
    const std::size_t a0 = ta * kTile;
    const std::size_t a1 = std::min(m, a0 + kTile - 1);
    for (std::size_t tb = 0; tb < tj_count; ++tb) {
      const std::size_t b0 = tb * kTile;
      const std::size_t b1 = std::min(n, b0 + kTile - 1);
      double tile = 0.0;
      for (std::size_t i = a0; i <= a1; ++i) {
        const double wi = trapezoid_weight(i, 0, m);
        for (std::size_t j = b0; j <= b1; ++j) {
          tile += wi * trapezoid_weight(j, 0, n) * kernel(xs[i], ys[j]);
        }
      }
      total += tile;
    }
  }
  return total * x_path.dt * x_path.dt;
}

double cross_ilt(const PlanarPath& path, Interval I, Interval J, MollifierScale eps) {
  validate_interval(path, I);
  validate_interval(path, J);
  // Canonical order makes the (I, J) <-> (J, I) symmetry bitwise exact.
  Interval a = I, b = J;
  if (b.lo_index < a.lo_index) std::swap(a, b);
  if (a.hi_index > b.lo_index) {
    throw std::invalid_argument("cross_ilt: interval interiors overlap");
  }
  return pairwise_cross_sum(path, a, b, eps);
}

GridSpec GridSpec::cover(const PlanarPath& path, MollifierScale eps, double cell_size) {
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("GridSpec::cover: cell_size must be positive");
  }
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  for (const Vec2& p : path.positions) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double margin = 5.0 * std::sqrt(eps.eps) + cell_size;
  return GridSpec{cell_size, xmin - margin, xmax + margin, ymin - margin, ymax + margin};
}

Vec2 OccupationGrid::center(std::size_t i, std::size_t j) const {
  return Vec2{spec.xmin + (static_cast<double>(i) + 0.5) * spec.cell_size,
              spec.ymin + (static_cast<double>(j) + 0.5) * spec.cell_size};
}

double OccupationGrid::total_mass() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * cell_area();
}

double OccupationGrid::l2_integral() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum * cell_area();
}

OccupationGrid occupation_density(const PlanarPath& path, MollifierScale eps,
                                  const GridSpec& spec) {
  if (!(spec.cell_size > 0.0) || spec.xmax <= spec.xmin || spec.ymax <= spec.ymin) {
    throw std::invalid_argument("occupation_density: malformed grid spec");
  }
  // The grid must cover the path range plus a 4*sqrt(eps) margin.
  const double needed = 4.0 * std::sqrt(eps.eps);
  double pxmin = 0.0, pxmax = 0.0, pymin = 0.0, pymax = 0.0;
  for (const Vec2& p : path.positions) {
    pxmin = std::min(pxmin, p.x);
    pxmax = std::max(pxmax, p.x);
    pymin = std::min(pymin, p.y);
    pymax = std::max(pymax, p.y);
  }
  if (spec.xmin > pxmin - needed || spec.xmax < pxmax + needed ||
      spec.ymin > pymin - needed || spec.ymax < pymax + needed) {
    throw std::invalid_argument(
        "occupation_density: grid does not cover the path; need at least [" +
        std::to_string(pxmin - needed) + ", " + std::to_string(pxmax + needed) + "] x [" +
        std::to_string(pymin - needed) + ", " + std::to_string(pymax + needed) + "]");
  }

  OccupationGrid grid;
  grid.spec = spec;
  grid.nx = static_cast<std::size_t>(std::ceil((spec.xmax - spec.xmin) / spec.cell_size));
  grid.ny = static_cast<std::size_t>(std::ceil((spec.ymax - spec.ymin) / spec.cell_size));
  grid.values.assign(grid.nx * grid.ny, 0.0);

  const Kernel kernel(eps.eps);
  const double cut = 5.0 * std::sqrt(eps.eps);  // truncation: tail mass < 1e-5
  const std::size_t n = path.n_steps();
  for (std::size_t k = 0; k <= n; ++k) {
    const Vec2 p = path.positions[k];
    const double w = trapezoid_weight(k, 0, n) * path.dt;
    const auto i_lo = static_cast<long>(std::floor((p.x - cut - spec.xmin) / spec.cell_size));
    const auto i_hi = static_cast<long>(std::floor((p.x + cut - spec.xmin) / spec.cell_size));
    const auto j_lo = static_cast<long>(std::floor((p.y - cut - spec.ymin) / spec.cell_size));
    const auto j_hi = static_cast<long>(std::floor((p.y + cut - spec.ymin) / spec.cell_size));
    for (long j = std::max(0L, j_lo); j <= std::min<long>(grid.ny - 1, j_hi); ++j) {
      for (long i = std::max(0L, i_lo); i <= std::min<long>(grid.nx - 1, i_hi); ++i) {
        const Vec2 c = grid.center(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        grid.values[static_cast<std::size_t>(j) * grid.nx + static_cast<std::size_t>(i)] +=
            w * kernel(p, c);
      }
    }
  }
  return grid;
}

IdentityCheck identity_check(const PlanarPath& path, MollifierScale eps, double T,
                             double cell_size) {
  const std::size_t hi = grid_index(path, T, "identity_check T");
  if (cell_size <= 0.0) cell_size = std::sqrt(eps.eps) / 4.0;

  IdentityCheck out;
  out.pairwise = pairwise_self_sum(path, Interval{0, hi}, MollifierScale(2.0 * eps.eps));

  PlanarPath clipped;
  clipped.dt = path.dt;
  clipped.seed = path.seed;
  clipped.origin_start = path.origin_start;
  clipped.positions.assign(path.positions.begin(), path.positions.begin() + hi + 1);
  const GridSpec spec = GridSpec::cover(clipped, eps, cell_size);
  const OccupationGrid grid = occupation_density(clipped, eps, spec);
  out.half_l2 = 0.5 * grid.l2_integral();
  const double denom = std::max({std::abs(out.pairwise), std::abs(out.half_l2), 1e-300});
  out.rel_gap = std::abs(out.pairwise - out.half_l2) / denom;
  return out;
}

}  // namespace siltlab
