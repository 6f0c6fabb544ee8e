#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace siltlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_norm(Vec2 v) { return v.x * v.x + v.y * v.y; }

// A planar Brownian trajectory sampled on a uniform time grid.
// positions has n_steps()+1 entries; increments are iid N(0, dt*I).
// Regenerating with the same (seed, dt, n_steps) is bit-identical.
struct PlanarPath {
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool origin_start = true;
  std::vector<Vec2> positions;

  std::size_t n_steps() const { return positions.empty() ? 0 : positions.size() - 1; }
  double horizon() const { return dt * static_cast<double>(n_steps()); }
};

// Closed index range [lo_index, hi_index] on a path's time grid; endpoints
// are lo_index*dt and hi_index*dt.
struct Interval {
  std::size_t lo_index = 0;
  std::size_t hi_index = 0;

  std::size_t n_steps() const { return hi_index - lo_index; }
};

PlanarPath generate_path(std::uint64_t seed, double dt, std::size_t n_steps);

// Two independent motions from disjoint sub-streams (seed,0) and (seed,1).
std::pair<PlanarPath, PlanarPath> independent_pair(std::uint64_t seed, double dt,
                                                   std::size_t n_steps_x,
                                                   std::size_t n_steps_y);

// Brownian rescaling: dt' = c*dt and every displacement scaled by sqrt(c);
// equal in law to a motion run to horizon c*T.
PlanarPath rescale(const PlanarPath& path, double c);

// Throws std::out_of_range unless I fits inside the path grid.
void validate_interval(const PlanarPath& path, Interval I);

}  // namespace siltlab
