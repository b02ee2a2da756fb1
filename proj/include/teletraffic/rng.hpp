#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace teletraffic {

// Seedable stream of U(0,1) deviates. Backed by the 64-bit Mersenne Twister,
// whose output sequence is fixed by the C++ standard, so a given seed gives
// the same deviates on every conforming platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 1);

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform01();

  std::uint64_t seed() const { return seed_; }

  // Independent child stream for replication i (seed mixed with splitmix64).
  RngStream substream(std::uint64_t i) const;

  // Used by gaussian_deviate to keep the second polar-method variate.
  bool take_spare(double& out);
  void put_spare(double v);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

double uniform01(RngStream& s);
double exp_deviate(RngStream& s, double rate);
// P(X > x) = (x/delta)^(-gamma) for x >= delta.
double pareto_deviate(RngStream& s, double gamma, double delta);
// Trials until first success, P(X=i) = (1-p)^(i-1) p.
long geometric_deviate(RngStream& s, double p);
long discrete_uniform_deviate(RngStream& s, long a, long b);
// Marsaglia polar method.
double gaussian_deviate(RngStream& s, double mean, double sigma);

struct Pmf {
  long support_min = 0;
  std::vector<double> probabilities;

  long support_max() const { return support_min + static_cast<long>(probabilities.size()) - 1; }
  double at(long i) const;
  double mean() const;
  double variance() const;
  double sum() const;
};

// Poisson pmf built by the ratio recursion outward from the mode, truncated
// where unnormalised terms (mode term = 1) drop below epsilon.
Pmf poisson_pmf(double lambda, double epsilon = 1e-12);

// Inverse-transform draw from a pmf.
long sample_pmf(RngStream& s, const Pmf& pmf);

}  // namespace teletraffic
