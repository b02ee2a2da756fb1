#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace teletraffic {

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;  // U_r
  double confidence = 0.95;
  std::size_t n = 0;

  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
  bool contains(double x) const { return x >= lower() && x <= upper(); }
  bool overlaps(const ConfidenceInterval& o) const { return lower() <= o.upper() && o.lower() <= upper(); }
};

// Student-t interval with n - 1 degrees of freedom.
ConfidenceInterval confidence_interval(const std::vector<double>& obs, double confidence = 0.95);
double t_quantile(double confidence, std::size_t dof);

double sample_mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);  // divisor n - 1

// (1/(m-k)) sum_{n>k} (x_{n-k} - mean)(x_n - mean).
double autocovariance(const std::vector<double>& x, std::size_t lag, double mean);
double autocorrelation(const std::vector<double>& x, std::size_t lag);

struct KsResult {
  double statistic;  // sup |F_n - F|
  double p_value;    // asymptotic Kolmogorov distribution
};

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
// P(K > x) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double x);

// Variance-time estimate of the Hurst parameter: slope of
// log Var(block means) against log block size is 2H - 2.
double hurst_variance_time(const std::vector<double>& x, const std::vector<std::size_t>& block_sizes);

}  // namespace teletraffic
