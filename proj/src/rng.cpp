#include "teletraffic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teletraffic/errors.hpp"

namespace teletraffic {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

double RngStream::uniform01() {
  // 53 random bits, shifted by half an ulp so both endpoints are excluded.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

RngStream RngStream::substream(std::uint64_t i) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(i + 1)));
}

bool RngStream::take_spare(double& out) {
  if (!has_spare_) return false;
  has_spare_ = false;
  out = spare_;
  return true;
}

void RngStream::put_spare(double v) {
  spare_ = v;
  has_spare_ = true;
}

double uniform01(RngStream& s) { return s.uniform01(); }

double exp_deviate(RngStream& s, double rate) {
  if (!(rate > 0.0)) throw ParameterError("exponential rate must be positive");
  return -std::log(s.uniform01()) / rate;
}

double pareto_deviate(RngStream& s, double gamma, double delta) {
  if (!(gamma > 0.0) || !(delta > 0.0)) throw ParameterError("pareto shape and scale must be positive");
  return delta * std::pow(s.uniform01(), -1.0 / gamma);
}

long geometric_deviate(RngStream& s, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("geometric p must be in (0,1]");
  if (p == 1.0) return 1;
  const double x = std::ceil(std::log(s.uniform01()) / std::log1p(-p));
  return x < 1.0 ? 1 : static_cast<long>(x);
}

long discrete_uniform_deviate(RngStream& s, long a, long b) {
  if (a > b) throw ParameterError("discrete uniform needs a <= b");
  const double width = static_cast<double>(b - a) + 1.0;
  long v = a + static_cast<long>(std::floor(s.uniform01() * width));
  return v > b ? b : v;
}

double gaussian_deviate(RngStream& s, double mean, double sigma) {
  if (!(sigma >= 0.0)) throw ParameterError("gaussian sigma must be non-negative");
  double z;
  if (!s.take_spare(z)) {
    double u, v, r2;
    do {
      u = 2.0 * s.uniform01() - 1.0;
      v = 2.0 * s.uniform01() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    s.put_spare(v * f);
    z = u * f;
  }
  return mean + sigma * z;
}

double Pmf::at(long i) const {
  if (i < support_min || i > support_max()) return 0.0;
  return probabilities[static_cast<std::size_t>(i - support_min)];
}

double Pmf::sum() const { return std::accumulate(probabilities.begin(), probabilities.end(), 0.0); }

double Pmf::mean() const {
  double m = 0.0;
  for (std::size_t j = 0; j < probabilities.size(); ++j) m += static_cast<double>(support_min + static_cast<long>(j)) * probabilities[j];
  return m;
}

double Pmf::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    const double d = static_cast<double>(support_min + static_cast<long>(j)) - m;
    v += d * d * probabilities[j];
  }
  return v;
}

Pmf poisson_pmf(double lambda, double epsilon) {
  if (!(lambda >= 0.0)) throw ParameterError("poisson mean must be non-negative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("poisson truncation must be in (0,1)");
  Pmf out;
  if (lambda == 0.0) {
    out.probabilities = {1.0};
    return out;
  }
  const long mode = static_cast<long>(std::floor(lambda));
  std::vector<double> down;  // terms mode-1, mode-2, ...
  double t = 1.0;
  for (long i = mode; i > 0; --i) {
    t *= static_cast<double>(i) / lambda;
    if (t < epsilon) break;
    down.push_back(t);
  }
  std::vector<double> up{1.0};  // terms mode, mode+1, ...
  t = 1.0;
  for (long i = mode + 1;; ++i) {
    t *= lambda / static_cast<double>(i);
    if (t < epsilon) break;
    up.push_back(t);
  }
  out.support_min = mode - static_cast<long>(down.size());
  out.probabilities.assign(down.rbegin(), down.rend());
  out.probabilities.insert(out.probabilities.end(), up.begin(), up.end());
  // Sum smallest terms first.
  std::vector<double> sorted = out.probabilities;
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  for (double& p : out.probabilities) p /= total;
  return out;
}

long sample_pmf(RngStream& s, const Pmf& pmf) {
  const double u = s.uniform01();
  double c = 0.0;
  for (std::size_t j = 0; j < pmf.probabilities.size(); ++j) {
    c += pmf.probabilities[j];
    if (u <= c) return pmf.support_min + static_cast<long>(j);
  }
  return pmf.support_max();
}

}  // namespace teletraffic
