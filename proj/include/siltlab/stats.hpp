#pragma once

#include <cstddef>
#include <vector>

namespace siltlab::stats {

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

MeanStdErr mean_std_error(const std::vector<double>& values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci95_slope = 0.0;  // 1.96 * stderr_slope
  std::size_t n_points = 0;
  bool valid = false;
};

// Ordinary least squares of y on x with residual-based slope error.
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

// Type-7 quantile (linear interpolation) of an unsorted sample.
double quantile(std::vector<double> values, double p);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace siltlab::stats
