#include "teletraffic/dimension.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

#include "teletraffic/errors.hpp"

namespace teletraffic {

double gaussian_multiplier(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must be in (0,1)");
  if (std::abs(alpha - 0.0015) < 1e-12) return 3.0;
  const boost::math::normal z;
  return boost::math::quantile(boost::math::complement(z, alpha));
}

double dim_link_binomial(int N, double p, double R, double alpha, BinomialMode mode) {
  if (N < 1) throw ParameterError("need N >= 1 sources");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("activity probability must be in [0,1]");
  if (!(R > 0.0)) throw ParameterError("peak rate must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must be in (0,1)");
  const double n = N;
  if (mode == BinomialMode::gaussian) {
    const double c = n * p + gaussian_multiplier(alpha) * std::sqrt(n * p * (1.0 - p));
    return std::min(n, c) * R;
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return n * R;
  const boost::math::binomial dist(n, p);
  int lo = 0, hi = N;  // tail at N is zero
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (boost::math::cdf(boost::math::complement(dist, static_cast<double>(mid))) <= alpha)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo * R;
}

SourceClass SourceClass::on_off(int count, double peak, double p) { return SourceClass{count, {0.0, peak}, {1.0 - p, p}}; }

void SourceClass::validate() const {
  if (count < 0) throw ParameterError("source count must be nonnegative");
  if (rates.empty() || rates.size() != probs.size()) throw ParameterError("rate ladder and probabilities must have equal, nonzero length");
  double s = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (!(rates[j] >= 0.0)) throw ParameterError("rates must be nonnegative");
    if (!(probs[j] >= 0.0 && probs[j] <= 1.0)) throw ParameterError("probabilities must be in [0,1]");
    s += probs[j];
  }
  if (std::abs(s - 1.0) > 1e-9) throw ParameterError("ladder probabilities must sum to 1");
}

double SourceClass::mean() const {
  double m = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) m += probs[j] * rates[j];
  return m;
}

double SourceClass::variance() const {
  double s2 = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) s2 += probs[j] * rates[j] * rates[j];
  const double m = mean();
  return std::max(0.0, s2 - m * m);
}

double SourceClass::peak() const { return *std::max_element(rates.begin(), rates.end()); }

LinkDimension dim_link_heterogeneous(const std::vector<SourceClass>& classes, double alpha) {
  if (classes.empty()) throw ParameterError("need at least one source class");
  LinkDimension d{0.0, 0.0, 0.0, 0.0};
  for (const auto& c : classes) {
    c.validate();
    d.mean += c.count * c.mean();
    d.variance += c.count * c.variance();
    d.peak_sum += c.count * c.peak();
  }
  d.capacity = std::min(d.peak_sum, d.mean + gaussian_multiplier(alpha) * std::sqrt(d.variance));
  return d;
}

ServerCount dim_erlang_b(double A, double target) {
  if (!(A >= 0.0) || !std::isfinite(A)) throw ParameterError("offered load must be a nonnegative number");
  if (!(target > 0.0 && target <= 1.0)) throw ParameterError("target blocking must be in (0,1]");
  // E_k(A) >= 1 - k/A, so no k below A (1 - target) can qualify.
  int k = std::max(0, static_cast<int>(std::floor(A * (1.0 - target))) - 1);
  double E = erlang_b(A, k);
  while (E > target) {
    ++k;
    E = A * E / (k + A * E);
  }
  return {k, E};
}

ServerCount dim_erlang_c(double A, ErlangCTarget kind, double target, double mu) {
  if (!(A > 0.0) || !std::isfinite(A)) throw ParameterError("offered load must be positive");
  if (!(mu > 0.0)) throw ParameterError("service rate must be positive");
  switch (kind) {
    case ErlangCTarget::delay_probability:
      if (target > 1.0) throw ParameterError("delay probability target must not exceed 1");
      if (!(target > 0.0)) throw InfeasibleError("a delay probability target of zero cannot be met");
      break;
    case ErlangCTarget::mean_delay:
      if (!(target > 1.0 / mu))
        throw InfeasibleError("mean delay target " + std::to_string(target) + " does not exceed the mean service time");
      break;
    case ErlangCTarget::delay_factor:
      if (!(target > 0.0)) throw InfeasibleError("a delay factor target of zero cannot be met");
      break;
  }
  int k = static_cast<int>(std::floor(A)) + 1;
  double E = erlang_b(A, k);
  while (true) {
    const double C = k * E / (k - A * (1.0 - E));
    double v = C;
    if (kind == ErlangCTarget::mean_delay) v = C / (k * mu - A * mu) + 1.0 / mu;
    if (kind == ErlangCTarget::delay_factor) v = C / (k - A);
    if (v <= target) return {k, v};
    ++k;
    E = A * E / (k + A * E);
  }
}

namespace {

void check_percentile(double t, double alpha) {
  if (!(t > 0.0)) throw ParameterError("delay threshold t must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must be in (0,1)");
}

}  // namespace

double dim_service_rate_percentile(double lambda, double t, double alpha) {
  if (!(lambda >= 0.0)) throw ParameterError("arrival rate must be nonnegative");
  check_percentile(t, alpha);
  return lambda - std::log(alpha) / t;
}

PercentileDimension dim_arrival_rate_percentile(double mu, double t, double alpha) {
  if (!(mu > 0.0)) throw ParameterError("service rate must be positive");
  check_percentile(t, alpha);
  const double floor_rate = -std::log(alpha) / t;
  if (mu < floor_rate) return {false, 0.0};
  return {true, std::max(0.0, std::log(alpha) / t + mu)};
}

MultiplexingGain multiplexing_gain(double lambda, double mu, int N) {
  if (!(lambda >= 0.0) || !(mu > 0.0)) throw ParameterError("need lambda >= 0 and mu > 0");
  if (N < 1) throw ParameterError("need N >= 1 streams");
  if (!(lambda < mu)) throw InstabilityError("multiplexing needs lambda < mu");
  const double rho = lambda / mu;
  return {mu + (N - 1) * lambda, (N - 1.0) / N * (1.0 - rho)};
}

double service_rate_for_delay(double lambda, double mean_delay) {
  if (!(lambda >= 0.0)) throw ParameterError("arrival rate must be nonnegative");
  if (!(mean_delay > 0.0)) throw ParameterError("mean delay must be positive");
  return lambda + 1.0 / mean_delay;
}

AccessRates tdma_fmux_rates(double lambda, double mean_delay, int N) {
  if (N < 1) throw ParameterError("need N >= 1 users");
  const double per_user = service_rate_for_delay(lambda, mean_delay);
  return {per_user, N * per_user, multiplexing_gain(lambda, per_user, N).mu_star};
}

OverflowDimension hayward_dimension(double M, double V, double target) {
  if (!(M > 0.0) || !(V > 0.0)) throw ParameterError("overflow mean and variance must be positive");
  const double Z = V / M;
  const ServerCount eq = dim_erlang_b(M / Z, target);
  const int servers = static_cast<int>(std::ceil(eq.k * Z - 1e-9));
  return {servers, eq.k, eq.achieved};
}

OverflowDimension erm_dimension(double M, double V, double target, NeqRounding rounding) {
  if (!(target > 0.0 && target <= 1.0)) throw ParameterError("target blocking must be in (0,1]");
  const ErmEquivalent eq = erm_equivalent(M, V, rounding);
  const double primary = erlang_b(eq.a_eq, eq.n_eq);
  int total = eq.n_eq;
  double E = primary;
  while (E > target * primary) {
    ++total;
    E = eq.a_eq * E / (total + eq.a_eq * E);
  }
  return {total - eq.n_eq, eq.n_eq, E / primary};
}

}  // namespace teletraffic
