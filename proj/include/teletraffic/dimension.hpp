#pragma once

#include <optional>
#include <vector>

#include "teletraffic/loss.hpp"

namespace teletraffic {

enum class BinomialMode { gaussian, exact };

// Capacity for N on-off sources of peak R, active with probability p, such
// that demand exceeds capacity at most a fraction alpha of the time.
// Gaussian mode uses 3 sigma when alpha = 0.0015 and the normal quantile
// otherwise; exact mode searches the binomial tail and returns a multiple of R.
double dim_link_binomial(int N, double p, double R, double alpha, BinomialMode mode = BinomialMode::gaussian);

// A source that transmits at rates[j] with probability probs[j]. `count`
// identical sources share the ladder. A two-level ladder {0, R} with
// {1-p, p} is the plain on-off source.
struct SourceClass {
  int count = 1;
  std::vector<double> rates;
  std::vector<double> probs;

  static SourceClass on_off(int count, double peak, double p);
  double mean() const;
  double variance() const;
  double peak() const;
  void validate() const;
};

struct LinkDimension {
  double capacity;
  double mean;
  double variance;
  double peak_sum;
};

LinkDimension dim_link_heterogeneous(const std::vector<SourceClass>& classes, double alpha = 0.0015);

// Gaussian multiplier used for a given alpha (3 at alpha = 0.0015).
double gaussian_multiplier(double alpha);

struct ServerCount {
  int k;
  double achieved;  // QoS value at k
};

// Minimal k with E_k(A) <= target.
ServerCount dim_erlang_b(double A, double target);

enum class ErlangCTarget { delay_probability, mean_delay, delay_factor };

// Minimal k > A meeting the bound; mean_delay needs mu (A = lambda / mu).
ServerCount dim_erlang_c(double A, ErlangCTarget kind, double target, double mu = 1.0);

struct PercentileDimension {
  bool feasible;
  double value;  // mu* or lambda*
};

// Minimal mu with P(D > t) <= alpha for M/M/1 at arrival rate lambda.
double dim_service_rate_percentile(double lambda, double t, double alpha);
// Maximal lambda with P(D > t) <= alpha at service rate mu.
PercentileDimension dim_arrival_rate_percentile(double mu, double t, double alpha);

struct MultiplexingGain {
  double mu_star;
  double gain;
};

MultiplexingGain multiplexing_gain(double lambda, double mu, int N);
// M/M/1 service rate giving mean delay `mean_delay`: lambda + 1/E[D].
double service_rate_for_delay(double lambda, double mean_delay);

struct AccessRates {
  double per_user;    // TDMA rate per user
  double tdma_total;  // N times per_user
  double fmux_total;  // per_user + (N - 1) lambda
};

// Total service rate meeting a mean delay for N Poisson users of rate
// lambda, with dedicated channels versus one shared server.
AccessRates tdma_fmux_rates(double lambda, double mean_delay, int N);

struct OverflowDimension {
  int servers;        // secondary servers
  int equivalent_k;   // Hayward: k in the equivalent system; ERM: N_eq
  double achieved;
};

OverflowDimension hayward_dimension(double M, double V, double target);
OverflowDimension erm_dimension(double M, double V, double target, NeqRounding rounding = NeqRounding::nearest);

}  // namespace teletraffic
