#include "spindlelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spindlelab/geometry.hpp"
#include "spindlelab/normal.hpp"

namespace spindlelab {

namespace {

// Kahan-Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + comp; }
};

}  // namespace

double kahan_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.total();
}

double sample_mean(std::span<const double> values) {
  return kahan_sum(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values, double mean) {
  if (values.size() < 2) return 0.0;
  CompensatedSum acc;
  for (double v : values) acc.add((v - mean) * (v - mean));
  return acc.total() / static_cast<double>(values.size() - 1);
}

namespace {

double central_moment(std::span<const double> values, double mean, int p) {
  CompensatedSum acc;
  for (double v : values) acc.add(std::pow(v - mean, p));
  return acc.total() / static_cast<double>(values.size());
}

}  // namespace

double skewness(std::span<const double> values) {
  const double mean = sample_mean(values);
  const double m2 = central_moment(values, mean, 2);
  const double m3 = central_moment(values, mean, 3);
  return m3 / (m2 * std::sqrt(m2));
}

double excess_kurtosis(std::span<const double> values) {
  const double mean = sample_mean(values);
  const double m2 = central_moment(values, mean, 2);
  const double m4 = central_moment(values, mean, 4);
  return m4 / (m2 * m2) - 3.0;
}

StandardizedSample standardize(int n, std::span<const double> values) {
  if (values.size() < 2) {
    throw InvariantError("standardize: need at least two replicates");
  }
  const double mean = sample_mean(values);
  const double sd = std::sqrt(sample_variance(values, mean));
  if (!(sd > 0.0)) {
    throw InvariantError("standardize: zero variance sample");
  }
  StandardizedSample s;
  s.n = n;
  s.values.reserve(values.size());
  for (double v : values) s.values.push_back((v - mean) / sd);
  return s;
}

namespace {

// Antiderivative of the standard normal CDF: G' = Phi, G(-inf) = 0.
double cdf_antiderivative(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// integral over [a, b] of |Phi(x) - c| for constant level c in [0, 1].
double l1_piece(double a, double b, double c) {
  const auto signed_part = [&](double lo, double hi) {
    return (cdf_antiderivative(hi) - cdf_antiderivative(lo)) - c * (hi - lo);
  };
  const double fa = normal_cdf(a);
  const double fb = normal_cdf(b);
  if (fb <= c) return -signed_part(a, b);
  if (fa >= c) return signed_part(a, b);
  const double z = normal_quantile(c);
  return -signed_part(a, z) + signed_part(z, b);
}

}  // namespace

double wasserstein_to_normal(std::span<const double> sample) {
  const std::size_t m = sample.size();
  if (m < 1) throw InvariantError("wasserstein_to_normal: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw InvariantError("wasserstein_to_normal: non-finite value");
  }
  std::sort(x.begin(), x.end());

  // below the smallest order statistic, F_m = 0
  double w = cdf_antiderivative(x.front());
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double level = static_cast<double>(i + 1) / static_cast<double>(m);
    if (x[i + 1] > x[i]) w += l1_piece(x[i], x[i + 1], level);
  }
  // above the largest, F_m = 1: integral of 1 - Phi
  w += normal_pdf(x.back()) - x.back() * (1.0 - normal_cdf(x.back()));
  return w;
}

double ks_to_normal(std::span<const double> sample) {
  const std::size_t m = sample.size();
  if (m < 1) throw InvariantError("ks_to_normal: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = normal_cdf(x[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(m) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(m);
    ks = std::max({ks, hi, lo});
  }
  return ks;
}

ScalingFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  const std::size_t k = x.size();
  if (k != y.size() || k < 2) {
    throw InvariantError("fit_power_law: need matching x/y with at least 2 points");
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(k);
  const double my = sy / static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvariantError("fit_power_law: degenerate x values");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points.reserve(k);
  for (std::size_t i = 0; i < k; ++i) fit.points.push_back({x[i], y[i]});
  return fit;
}

ScalingFit fit_log_log(std::span<const double> n, std::span<const double> value) {
  std::vector<double> lx(n.size());
  std::vector<double> ly(value.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(value[i] > 0.0)) {
      throw InvariantError("fit_log_log: inputs must be positive");
    }
    lx[i] = std::log(n[i]);
    ly[i] = std::log(value[i]);
  }
  return fit_power_law(lx, ly);
}

}  // namespace spindlelab
