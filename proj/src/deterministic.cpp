#include "teletraffic/deterministic.hpp"

#include <cmath>

#include "teletraffic/errors.hpp"

namespace teletraffic {

Rational to_rational(double x, long long max_den) {
  if (!std::isfinite(x)) throw ParameterError("cannot convert non-finite value to a fraction");
  const bool neg = x < 0.0;
  double v = std::abs(x);
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // convergents h/k
  double r = v;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (a > 9e15) break;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - v) <= 1e-12 * std::max(1.0, v)) break;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (k1 == 0 || std::abs(static_cast<double>(h1) / static_cast<double>(k1) - v) > 1e-12 * std::max(1.0, v))
    throw ParameterError("value has no small-denominator fraction: " + std::to_string(x));
  return Rational(neg ? -h1 : h1, k1);
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

bool DeterministicResult::operator==(const DeterministicResult& o) const {
  if (infinite_queue != o.infinite_queue || utilization != o.utilization || blocking != o.blocking) return false;
  if (infinite_queue) return true;
  return mean_queue == o.mean_queue && state_fractions == o.state_fractions && cycle_length == o.cycle_length;
}

namespace {

long long ceil_rat(const Rational& r) {
  const long long q = r.numerator() / r.denominator();
  return (r.numerator() % r.denominator() == 0) ? q : (r.numerator() > 0 ? q + 1 : q);
}

void check(const Rational& lambda, const Rational& mu) {
  if (lambda <= Rational(0) || mu <= Rational(0)) throw ParameterError("deterministic rates must be positive");
}

void put(DeterministicResult& r, long n, const Rational& p) {
  if (p != Rational(0)) r.state_fractions[n] = p;
}

DeterministicResult overloaded(const Rational& utilization) {
  DeterministicResult r;
  r.infinite_queue = true;
  r.utilization = utilization;
  return r;
}

}  // namespace

DeterministicResult ddk(const Rational& lambda, const Rational& mu, int k) {
  check(lambda, mu);
  if (k < 1) throw ParameterError("need k >= 1 servers");
  if (lambda > mu * k) return overloaded(Rational(1));
  const Rational A = lambda / mu;
  const long long n = ceil_rat(A);
  DeterministicResult r;
  put(r, static_cast<long>(n) - 1, Rational(n) - A);
  put(r, static_cast<long>(n), A - Rational(n - 1));
  r.mean_queue = A;
  r.utilization = A / k;
  r.cycle_length = 1 / lambda;
  return r;
}

DeterministicResult dd1(const Rational& lambda, const Rational& mu) { return ddk(lambda, mu, 1); }

DeterministicResult ddkk(const Rational& lambda, const Rational& mu, int k) {
  check(lambda, mu);
  if (k < 1) throw ParameterError("need k >= 1 servers");
  const Rational A = lambda / mu;
  if (A <= Rational(k)) return ddk(lambda, mu, k);
  const long long c = ceil_rat(A);
  DeterministicResult r;
  r.blocking = Rational(c - k, c);
  r.mean_queue = A * k / c;
  r.utilization = A / c;
  const Rational below = Rational(k) * (Rational(c) - A) / c;
  put(r, k - 1, below);
  put(r, k, 1 - below);
  r.cycle_length = Rational(c) / lambda;
  return r;
}

DeterministicResult dd1n(const Rational& lambda, const Rational& mu, int N) {
  check(lambda, mu);
  if (N < 1) throw ParameterError("need N >= 1");
  if (lambda <= mu) return dd1(lambda, mu);
  if (N == 1) return ddkk(lambda, mu, 1);
  // lambda/mu = p/q. Departures at j/mu fall on an arrival every q-th time,
  // so the gaps spent at N-1 add up to (q-1)/(2 lambda) per cycle of p/lambda.
  const Rational ratio = lambda / mu;
  const long long p = ratio.numerator(), q = ratio.denominator();
  DeterministicResult r;
  r.blocking = (lambda - mu) / lambda;
  r.utilization = 1;
  const Rational low = Rational(q - 1, 2 * p);
  put(r, N - 1, low);
  put(r, N, 1 - low);
  r.mean_queue = Rational(N) - low;
  r.cycle_length = Rational(q) / mu;
  return r;
}

DeterministicResult dd1(double lambda, double mu) { return dd1(to_rational(lambda), to_rational(mu)); }
DeterministicResult ddk(double lambda, double mu, int k) { return ddk(to_rational(lambda), to_rational(mu), k); }
DeterministicResult ddkk(double lambda, double mu, int k) { return ddkk(to_rational(lambda), to_rational(mu), k); }
DeterministicResult dd1n(double lambda, double mu, int N) { return dd1n(to_rational(lambda), to_rational(mu), N); }

double slb_d1n(double burst, int N) {
  if (N < 1) throw ParameterError("need N >= 1");
  if (!(burst >= 0.0)) throw ParameterError("burst size must be non-negative");
  if (burst <= N) return 0.0;
  return (burst - N) / burst;
}

}  // namespace teletraffic
