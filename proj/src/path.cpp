#include "siltlab/path.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "siltlab/rng.hpp"

namespace siltlab {

namespace {

constexpr std::size_t kMaxSteps = std::size_t{1} << 31;

void fill_increments(PlanarPath& path, std::uint64_t engine_seed, std::size_t n_steps) {
  rng::NormalStream stream(engine_seed);
  const double sigma = std::sqrt(path.dt);
  path.positions.resize(n_steps + 1);
  path.positions[0] = Vec2{0.0, 0.0};
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double dx = sigma * stream.normal();
    const double dy = sigma * stream.normal();
    path.positions[i + 1] = Vec2{path.positions[i].x + dx, path.positions[i].y + dy};
  }
}

}  // namespace

PlanarPath generate_path(std::uint64_t seed, double dt, std::size_t n_steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("generate_path: dt must be positive and finite");
  }
  if (n_steps >= kMaxSteps) {
    throw std::invalid_argument("generate_path: n_steps exceeds index budget");
  }
  PlanarPath path;
  path.dt = dt;
  path.seed = seed;
  path.origin_start = true;
  fill_increments(path, rng::stream_seed(seed, 0), n_steps);
  return path;
}

std::pair<PlanarPath, PlanarPath> independent_pair(std::uint64_t seed, double dt,
                                                   std::size_t n_steps_x,
                                                   std::size_t n_steps_y) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("independent_pair: dt must be positive and finite");
  }
  if (n_steps_x >= kMaxSteps || n_steps_y >= kMaxSteps) {
    throw std::invalid_argument("independent_pair: n_steps exceeds index budget");
  }
  PlanarPath x;
  x.dt = dt;
  x.seed = seed;
  fill_increments(x, rng::stream_seed(seed, 0), n_steps_x);
  PlanarPath y;
  y.dt = dt;
  y.seed = seed;
  fill_increments(y, rng::stream_seed(seed, 1), n_steps_y);
  return {std::move(x), std::move(y)};
}

PlanarPath rescale(const PlanarPath& path, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("rescale: factor must be positive and finite");
  }
  PlanarPath out;
  out.dt = c * path.dt;
  out.seed = path.seed;
  out.origin_start = path.origin_start;
  const double root = std::sqrt(c);
  out.positions.reserve(path.positions.size());
  for (const Vec2& p : path.positions) {
    out.positions.push_back(Vec2{root * p.x, root * p.y});
  }
  return out;
}

void validate_interval(const PlanarPath& path, Interval I) {
  if (I.lo_index > I.hi_index || I.hi_index > path.n_steps()) {
    throw std::out_of_range("interval [" + std::to_string(I.lo_index) + ", " +
                            std::to_string(I.hi_index) + "] outside path grid of " +
                            std::to_string(path.n_steps()) + " steps");
  }
}

}  // namespace siltlab
