#include "teletraffic/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "teletraffic/errors.hpp"

namespace teletraffic {

double t_quantile(double confidence, std::size_t dof) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ParameterError("confidence must be in (0,1)");
  if (dof < 1) throw ParameterError("need at least one degree of freedom");
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
}

double sample_mean(const std::vector<double>& x) {
  if (x.empty()) throw ParameterError("empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) throw ParameterError("sample variance needs at least two observations");
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

ConfidenceInterval confidence_interval(const std::vector<double>& obs, double confidence) {
  if (obs.size() < 2) throw ParameterError("confidence interval needs n >= 2 observations");
  ConfidenceInterval ci;
  ci.n = obs.size();
  ci.confidence = confidence;
  ci.mean = sample_mean(obs);
  const double var = sample_variance(obs);
  ci.half_width = var > 0.0 ? t_quantile(confidence, obs.size() - 1) * std::sqrt(var / static_cast<double>(obs.size())) : 0.0;
  return ci;
}

double autocovariance(const std::vector<double>& x, std::size_t lag, double mean) {
  if (lag >= x.size()) throw ParameterError("lag exceeds sample length");
  double s = 0.0;
  for (std::size_t n = lag; n < x.size(); ++n) s += (x[n - lag] - mean) * (x[n] - mean);
  return s / static_cast<double>(x.size() - lag);
}

double autocorrelation(const std::vector<double>& x, std::size_t lag) {
  const double m = sample_mean(x);
  return autocovariance(x, lag, m) / autocovariance(x, 0, m);
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ParameterError("KS test needs a sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  // Stephens' small-sample correction of the scaling.
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

double hurst_variance_time(const std::vector<double>& x, const std::vector<std::size_t>& block_sizes) {
  std::vector<double> lx, ly;
  for (std::size_t m : block_sizes) {
    const std::size_t blocks = x.size() / m;
    if (m == 0 || blocks < 2) continue;
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
      means[b] = std::accumulate(x.begin() + static_cast<std::ptrdiff_t>(b * m), x.begin() + static_cast<std::ptrdiff_t>((b + 1) * m), 0.0) / static_cast<double>(m);
    lx.push_back(std::log(static_cast<double>(m)));
    ly.push_back(std::log(sample_variance(means)));
  }
  if (lx.size() < 2) throw ParameterError("need at least two usable block sizes");
  const double mx = sample_mean(lx), my = sample_mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return 1.0 + 0.5 * (sxy / sxx);
}

}  // namespace teletraffic
