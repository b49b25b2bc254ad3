#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace spindlelab {

// Compensated (Kahan) summation in array order.
double kahan_sum(std::span<const double> values);

double sample_mean(std::span<const double> values);
// Unbiased sample variance (divides by m - 1).
double sample_variance(std::span<const double> values, double mean);
double skewness(std::span<const double> values);
double excess_kurtosis(std::span<const double> values);

// Centered and scaled replicates: empirical mean 0, unbiased variance 1.
struct StandardizedSample {
  int n = 0;
  std::vector<double> values;
};

StandardizedSample standardize(int n, std::span<const double> values);

// Exact L1 distance between the empirical CDF and the standard normal CDF
// (the dual form of the 1-d Wasserstein distance), from order statistics.
double wasserstein_to_normal(std::span<const double> sample);

// Kolmogorov-Smirnov statistic against the standard normal.
double ks_to_normal(std::span<const double> sample);

// Ordinary least squares fit y = intercept + exponent * x.
struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (x, y) as fitted
};

ScalingFit fit_power_law(std::span<const double> x, std::span<const double> y);
// Convenience: fits log(value) against log(n).
ScalingFit fit_log_log(std::span<const double> n, std::span<const double> value);

}  // namespace spindlelab
