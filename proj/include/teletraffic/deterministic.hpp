#pragma once

#include <boost/rational.hpp>
#include <map>

namespace teletraffic {

using Rational = boost::rational<long long>;

// Continued-fraction conversion; throws when no fraction with denominator
// up to max_den matches x to 1e-12 relative.
Rational to_rational(double x, long long max_den = 1000000);
double to_double(const Rational& r);

// Long-run behaviour of a deterministic queue. Arrivals at 0, 1/lambda,
// 2/lambda, ...; on ties the departure is processed first.
struct DeterministicResult {
  bool infinite_queue = false;  // queue grows without bound; mean_queue unused
  Rational mean_queue{0};
  Rational utilization{0};
  Rational blocking{0};
  std::map<long, Rational> state_fractions;  // only states with positive time
  Rational cycle_length{0};                  // time span of one repeating pattern

  bool operator==(const DeterministicResult& o) const;
};

DeterministicResult dd1(const Rational& lambda, const Rational& mu);
DeterministicResult ddk(const Rational& lambda, const Rational& mu, int k);
DeterministicResult ddkk(const Rational& lambda, const Rational& mu, int k);
DeterministicResult dd1n(const Rational& lambda, const Rational& mu, int N);

DeterministicResult dd1(double lambda, double mu);
DeterministicResult ddk(double lambda, double mu, int k);
DeterministicResult ddkk(double lambda, double mu, int k);
DeterministicResult dd1n(double lambda, double mu, int N);

// One burst of L_B simultaneous arrivals into a buffer of N: (L_B - N)/L_B.
double slb_d1n(double burst, int N);

}  // namespace teletraffic
