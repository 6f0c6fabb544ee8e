#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "siltlab/estimators.hpp"
#include "siltlab/path.hpp"
#include "siltlab/stats.hpp"

namespace siltlab {

// A Monte Carlo scalar with its sampling error and the fingerprint of the
// configuration that produced it.
struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_replicas = 0;
  std::string config_fingerprint;
};

// Replica r runs as a pure function of its index (each derives its own seed
// as stream r of a base seed); results land in an index-keyed vector and
// every aggregation below folds them in replica order, so the output is
// bit-identical for any pool size.
std::vector<double> run_replicas(std::uint64_t n_replicas, unsigned threads,
                                 const std::function<double(std::uint64_t)>& replica);

// Worker count actually used: the SILTLAB_THREADS environment variable
// overrides `requested`; 0 means hardware concurrency.
unsigned effective_threads(unsigned requested);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci95 = 0.0;
  std::size_t n_points = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool valid = false;
};

// Empirical tail curve: exceedance counts per threshold, log survival where
// the count is positive, and an OLS slope over the fit window restricted to
// thresholds with at least kMinExceedances exceedances.
struct TailCurve {
  std::vector<double> thresholds;
  std::vector<std::uint64_t> exceed_counts;
  std::uint64_t n_replicas = 0;
  std::vector<double> log_survival;  // NaN where the count is zero
  SlopeFit slope_fit;
  std::string config_fingerprint;
  stats::MeanStdErr sample_mean;

  std::vector<bool> in_fit_window() const;
};

constexpr std::uint64_t kMinExceedances = 50;

struct TailConfig {
  std::uint64_t seed = 1;
  std::uint64_t n_replicas = 10000;
  double dt = 0.005;
  double eps = 0.04;
  std::vector<double> thresholds;
  double fit_lo = 0.0;  // fit window; 0,0 means "all qualifying bins"
  double fit_hi = 0.0;
  unsigned threads = 0;
};

// Upper tail of the mutual intersection local time of two unit-time motions.
TailCurve tail_curve_alpha(const TailConfig& config);

// Upper tail of the centered self-intersection local time at horizon 1.
TailCurve tail_curve_beta_upper(const TailConfig& config);

// Lower tail: thresholds are levels of -beta_hat(1). l_proxy holds the
// transformed statistic -exp(-2*pi*level)*log(survival) per level (an
// empirical probe of the double-exponential regime; no reference value).
struct LowerTailCurve {
  TailCurve curve;
  std::vector<double> l_proxy;
};

LowerTailCurve tail_curve_beta_lower(const TailConfig& config);

// Tail of alpha_hat(1, a) for a in (0, 1); its slope scales like 1/sqrt(a).
TailCurve alpha_small_a_tail(double a, const TailConfig& config);

// Build a curve from raw replica values (exposed for reuse and testing).
TailCurve tail_curve_from_values(const std::vector<double>& values,
                                 const TailConfig& config, const char* estimator_id);

// One long-horizon trajectory observed at checkpoints t_k ~ q^k (rounded to
// the grid). values holds the centered self-intersection local time at each
// checkpoint, accumulated incrementally: extending [0, t_{k-1}] to [0, t_k]
// adds one triangle piece and one cross rectangle. normalized_up is
// value/(t log log t) where log log t > 0, normalized_down is
// -value/(t log log log t) where that is positive; NaN outside the domain.
struct LilTrace {
  std::vector<double> checkpoints;
  std::vector<double> values;
  std::vector<double> normalized_up;
  std::vector<double> normalized_down;
};

struct LilConfig {
  std::uint64_t seed = 1;
  double q = 1.7782794100389228;  // 10^(1/4)
  std::size_t n_checkpoints = 16;
  double dt = 0.25;
  double eps = 2.0;
};

LilTrace lil_trace(const LilConfig& config);

// Max-so-far aggregates of the normalized columns across replicas.
struct LilBatchSummary {
  std::uint64_t n_replicas = 0;
  double up_median = 0.0, up_q1 = 0.0, up_q3 = 0.0;
  double down_median = 0.0, down_q1 = 0.0, down_q3 = 0.0;
  double reference_up = 0.0;    // 1/gamma_beta
  double reference_down = 0.0;  // 1/(2*pi)
};

LilBatchSummary lil_batch_summary(const std::vector<LilTrace>& traces);

// Sup over dyadic radii r_k = 2^-k (k >= -1, capped where balls fall below
// the path resolution) and centers on the 2^-k lattice inside B(0,4) of
// U_horizon(x, r_k)/r_k, where U is the time spent in the ball.
double occupation_sup_stat(const PlanarPath& path, double horizon = 1.0);

// Time spent by the path in B(x, r) up to `horizon` (trapezoid in time).
double occupation_time(const PlanarPath& path, Vec2 x, double r, double horizon);

// Fingerprint of (estimator id, seed, dt, eps, horizon, n_replicas).
std::string estimator_fingerprint(const char* estimator_id, std::uint64_t seed,
                                  double dt, double eps, double horizon,
                                  std::uint64_t n_replicas);

}  // namespace siltlab
