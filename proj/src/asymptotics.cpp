#include "siltlab/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "siltlab/errors.hpp"
#include "siltlab/rng.hpp"
#include "siltlab/silt.hpp"

namespace siltlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t checked_steps(double horizon, double dt, const char* what) {
  const double steps = horizon / dt;
  if (!(steps >= 0.0) || steps > 4.0e9) {
    throw std::invalid_argument(std::string(what) + ": horizon/dt out of range");
  }
  const auto n = static_cast<std::uint64_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument(std::string(what) + ": horizon does not align to dt grid");
  }
  return n;
}

}  // namespace

unsigned effective_threads(unsigned requested) {
  if (const char* env = std::getenv("SILTLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  if (requested == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return requested;
}

std::vector<double> run_replicas(std::uint64_t n_replicas,
                                 unsigned threads,
                                 const std::function<double(std::uint64_t)>& replica) {
  std::vector<double> results(n_replicas, 0.0);
  const unsigned pool = std::max(1u, effective_threads(threads));
  if (pool == 1 || n_replicas < 2) {
    for (std::uint64_t r = 0; r < n_replicas; ++r) results[r] = replica(r);
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1);
      if (r >= n_replicas) return;
      try {
        results[r] = replica(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool_threads;
  pool_threads.reserve(pool);
  for (unsigned t = 0; t < pool; ++t) pool_threads.emplace_back(worker);
  for (std::thread& t : pool_threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

std::string estimator_fingerprint(const char* estimator_id, std::uint64_t seed,
                                  double dt, double eps, double horizon,
                                  std::uint64_t n_replicas) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s|seed=%llu|dt=%.17g|eps=%.17g|horizon=%.17g|n=%llu",
                estimator_id, static_cast<unsigned long long>(seed), dt, eps, horizon,
                static_cast<unsigned long long>(n_replicas));
  const std::uint64_t h = rng::fnv1a(buf, std::strlen(buf));
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

std::vector<bool> TailCurve::in_fit_window() const {
  std::vector<bool> in(thresholds.size(), false);
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (exceed_counts[k] < kMinExceedances) continue;
    if (slope_fit.window_lo != 0.0 || slope_fit.window_hi != 0.0) {
      if (thresholds[k] < slope_fit.window_lo || thresholds[k] > slope_fit.window_hi) {
        continue;
      }
    }
    in[k] = true;
  }
  return in;
}

TailCurve tail_curve_from_values(const std::vector<double>& values,
                                 const TailConfig& config, const char* estimator_id) {
  if (config.thresholds.empty()) {
    throw std::invalid_argument("tail curve: thresholds must be nonempty");
  }
  TailCurve curve;
  curve.thresholds = config.thresholds;
  std::sort(curve.thresholds.begin(), curve.thresholds.end());
  curve.n_replicas = values.size();
  curve.sample_mean = stats::mean_std_error(values);
  curve.exceed_counts.assign(curve.thresholds.size(), 0);
  for (double v : values) {
    for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
      if (v >= curve.thresholds[k]) {
        curve.exceed_counts[k]++;
      } else {
        break;  // thresholds ascending
      }
    }
  }
  if (curve.exceed_counts[0] == 0) {
    throw NumericalError("tail curve: no exceedances at the smallest threshold");
  }
  curve.log_survival.assign(curve.thresholds.size(), kNaN);
  for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
    if (curve.exceed_counts[k] > 0) {
      curve.log_survival[k] = std::log(static_cast<double>(curve.exceed_counts[k]) /
                                       static_cast<double>(curve.n_replicas));
    }
  }
  curve.slope_fit.window_lo = config.fit_lo;
  curve.slope_fit.window_hi = config.fit_hi;
  curve.config_fingerprint = estimator_fingerprint(
      estimator_id, config.seed, config.dt, config.eps, 1.0, config.n_replicas);

  std::vector<double> xs, ys;
  const std::vector<bool> in = curve.in_fit_window();
  for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
    if (in[k]) {
      xs.push_back(curve.thresholds[k]);
      ys.push_back(curve.log_survival[k]);
    }
  }
  const stats::LinearFit fit = stats::ols_fit(xs, ys);
  curve.slope_fit.slope = fit.slope;
  curve.slope_fit.intercept = fit.intercept;
  curve.slope_fit.stderr_slope = fit.stderr_slope;
  curve.slope_fit.ci95 = fit.ci95_slope;
  curve.slope_fit.n_points = fit.n_points;
  curve.slope_fit.valid = fit.valid;
  return curve;
}

TailCurve tail_curve_alpha(const TailConfig& config) {
  const std::uint64_t n = checked_steps(1.0, config.dt, "tail_curve_alpha");
  const MollifierScale eps(config.eps);
  const auto replica = [&](std::uint64_t r) {
    const auto [x, y] = independent_pair(rng::stream_seed(config.seed, r), config.dt,
                                         n, n);
    return alpha_hat(x, y, eps, 1.0, 1.0);
  };
  const std::vector<double> values =
      run_replicas(config.n_replicas, config.threads, replica);
  return tail_curve_from_values(values, config, "alpha-upper-tail");
}

TailCurve tail_curve_beta_upper(const TailConfig& config) {
  const std::uint64_t n = checked_steps(1.0, config.dt, "tail_curve_beta_upper");
  const MollifierScale eps(config.eps);
  const auto replica = [&](std::uint64_t r) {
    const PlanarPath path = generate_path(rng::stream_seed(config.seed, r), config.dt, n);
    return beta_hat(path, Interval{0, n}, eps).value;
  };
  const std::vector<double> values =
      run_replicas(config.n_replicas, config.threads, replica);
  return tail_curve_from_values(values, config, "beta-upper-tail");
}

LowerTailCurve tail_curve_beta_lower(const TailConfig& config) {
  const std::uint64_t n = checked_steps(1.0, config.dt, "tail_curve_beta_lower");
  const MollifierScale eps(config.eps);
  const auto replica = [&](std::uint64_t r) {
    const PlanarPath path = generate_path(rng::stream_seed(config.seed, r), config.dt, n);
    return -beta_hat(path, Interval{0, n}, eps).value;
  };
  const std::vector<double> values =
      run_replicas(config.n_replicas, config.threads, replica);
  LowerTailCurve out;
  out.curve = tail_curve_from_values(values, config, "beta-lower-tail");
  out.l_proxy.assign(out.curve.thresholds.size(), kNaN);
  for (std::size_t k = 0; k < out.curve.thresholds.size(); ++k) {
    if (out.curve.exceed_counts[k] > 0) {
      out.l_proxy[k] = -std::exp(-2.0 * std::numbers::pi * out.curve.thresholds[k]) *
                       out.curve.log_survival[k];
    }
  }
  return out;
}

TailCurve alpha_small_a_tail(double a, const TailConfig& config) {
  if (!(a > 0.0) || a >= 1.0) {
    throw std::invalid_argument("alpha_small_a_tail: a must lie in (0, 1)");
  }
  const std::uint64_t nx = checked_steps(1.0, config.dt, "alpha_small_a_tail");
  const std::uint64_t ny = checked_steps(a, config.dt, "alpha_small_a_tail a");
  const MollifierScale eps(config.eps);
  const auto replica = [&](std::uint64_t r) {
    const auto [x, y] = independent_pair(rng::stream_seed(config.seed, r), config.dt,
                                         nx, ny);
    return alpha_hat(x, y, eps, 1.0, a);
  };
  const std::vector<double> values =
      run_replicas(config.n_replicas, config.threads, replica);
  return tail_curve_from_values(values, config, "alpha-small-a-tail");
}

LilTrace lil_trace(const LilConfig& config) {
  if (!(config.q > 1.0)) throw std::invalid_argument("lil_trace: q must exceed 1");
  if (config.n_checkpoints == 0) {
    throw std::invalid_argument("lil_trace: need at least one checkpoint");
  }
  std::vector<std::size_t> indices;
  indices.reserve(config.n_checkpoints);
  double t = 1.0;
  for (std::size_t k = 1; k <= config.n_checkpoints; ++k) {
    t *= config.q;
    const double steps = t / config.dt;
    if (steps > 4.0e9) throw std::invalid_argument("lil_trace: horizon overflow");
    const auto idx = static_cast<std::size_t>(std::llround(steps));
    if (idx == 0 || (!indices.empty() && idx <= indices.back())) {
      throw std::invalid_argument("lil_trace: checkpoints collapse on the grid; "
                                  "increase q or refine dt");
    }
    indices.push_back(idx);
  }

  const PlanarPath path = generate_path(config.seed, config.dt, indices.back());
  const MollifierScale eps(config.eps);

  LilTrace trace;
  trace.checkpoints.reserve(indices.size());
  trace.values.reserve(indices.size());
  double raw = 0.0;
  std::size_t prev = 0;
  for (const std::size_t idx : indices) {
    raw += pairwise_self_sum(path, Interval{prev, idx}, eps);
    if (prev > 0) {
      raw += pairwise_cross_sum(path, Interval{0, prev}, Interval{prev, idx}, eps);
    }
    prev = idx;
    const double tk = static_cast<double>(idx) * config.dt;
    const double value = raw - centering_term(tk, eps);
    trace.checkpoints.push_back(tk);
    trace.values.push_back(value);
    const double loglog = std::log(std::log(tk));
    trace.normalized_up.push_back(loglog > 0.0 ? value / (tk * loglog) : kNaN);
    const double logloglog = std::log(std::log(std::log(tk)));
    trace.normalized_down.push_back(logloglog > 0.0 ? -value / (tk * logloglog) : kNaN);
  }
  return trace;
}

LilBatchSummary lil_batch_summary(const std::vector<LilTrace>& traces) {
  LilBatchSummary out;
  out.n_replicas = traces.size();
  std::vector<double> max_up, max_down;
  for (const LilTrace& trace : traces) {
    double up = -std::numeric_limits<double>::infinity();
    double down = -std::numeric_limits<double>::infinity();
    for (double v : trace.normalized_up) {
      if (!std::isnan(v)) up = std::max(up, v);
    }
    for (double v : trace.normalized_down) {
      if (!std::isnan(v)) down = std::max(down, v);
    }
    if (std::isfinite(up)) max_up.push_back(up);
    if (std::isfinite(down)) max_down.push_back(down);
  }
  if (!max_up.empty()) {
    out.up_median = stats::quantile(max_up, 0.5);
    out.up_q1 = stats::quantile(max_up, 0.25);
    out.up_q3 = stats::quantile(max_up, 0.75);
  }
  if (!max_down.empty()) {
    out.down_median = stats::quantile(max_down, 0.5);
    out.down_q1 = stats::quantile(max_down, 0.25);
    out.down_q3 = stats::quantile(max_down, 0.75);
  }
  return out;
}

double occupation_time(const PlanarPath& path, Vec2 x, double r, double horizon) {
  const std::size_t n = grid_index(path, horizon, "occupation_time horizon");
  const double r2 = r * r;
  double sum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double dx = path.positions[k].x - x.x;
    const double dy = path.positions[k].y - x.y;
    if (dx * dx + dy * dy < r2) {
      sum += (k == 0 || k == n) ? 0.5 : 1.0;
    }
  }
  return sum * path.dt;
}

double occupation_sup_stat(const PlanarPath& path, double horizon) {
  const std::size_t n = grid_index(path, horizon, "occupation_sup_stat horizon");
  // Balls below the path resolution carry no information; cap the dyadic
  // level at ceil(log2(1/(4 sqrt(dt)))).
  const double k_cap = std::ceil(std::log2(1.0 / (4.0 * std::sqrt(path.dt))));
  const int k_max = std::max(-1, static_cast<int>(k_cap));

  double best = 0.0;
  for (int k = -1; k <= k_max; ++k) {
    const double spacing = std::pow(2.0, -k);  // lattice pitch == ball radius
    const double radius = spacing;
    const auto half_span = static_cast<long>(std::floor(4.0 / spacing));
    const long width = 2 * half_span + 1;
    std::vector<double> occupancy(static_cast<std::size_t>(width * width), 0.0);
    const double r2 = radius * radius;
    for (std::size_t s = 0; s <= n; ++s) {
      const Vec2 p = path.positions[s];
      const double w = ((s == 0 || s == n) ? 0.5 : 1.0) * path.dt;
      const auto ci = static_cast<long>(std::floor(p.x / spacing));
      const auto cj = static_cast<long>(std::floor(p.y / spacing));
      for (long j = cj - 1; j <= cj + 2; ++j) {
        if (j < -half_span || j > half_span) continue;
        for (long i = ci - 1; i <= ci + 2; ++i) {
          if (i < -half_span || i > half_span) continue;
          const double cx = static_cast<double>(i) * spacing;
          const double cy = static_cast<double>(j) * spacing;
          if (cx * cx + cy * cy > 16.0) continue;  // centers restricted to B(0,4)
          const double dx = p.x - cx;
          const double dy = p.y - cy;
          if (dx * dx + dy * dy < r2) {
            occupancy[static_cast<std::size_t>((j + half_span) * width + (i + half_span))] += w;
          }
        }
      }
    }
    for (double u : occupancy) best = std::max(best, u / radius);
  }
  return best;
}

}  // namespace siltlab
