#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bohm {

struct SampleMoments {
  double mean = 0.0;
  /// Unbiased sample standard deviation (0 for fewer than two values).
  double stddev = 0.0;
  std::size_t count = 0;

  double std_error() const;
};

/// Two-pass moments in index order, so results do not depend on scheduling.
SampleMoments moments(std::span<const double> values);

double normal_cdf(double x, double mean, double stddev);

/// Two-sided Kolmogorov-Smirnov statistic sup |F_n - F| of `values` against `cdf`.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z);

}  // namespace bohm
