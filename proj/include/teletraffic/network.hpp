#pragma once

#include <string>
#include <vector>

#include "teletraffic/delay.hpp"

namespace teletraffic {

struct JacksonSpec {
  std::vector<double> external_rates;           // r_j
  std::vector<double> service_rates;            // mu_j
  std::vector<std::vector<double>> routing;     // P[i][j], row sums <= 1
  void validate() const;
};

struct JacksonResult {
  std::vector<double> arrival_rates;  // lambda_j
  std::vector<double> utilization;    // rho_j
  std::vector<QueueMetrics> queues;
  double network_mean_delay;          // sum E[Q_j] / sum r_j
  double mean_population;
  double prob_all_empty;
};

JacksonResult jackson_solve(const JacksonSpec& spec);

struct CircuitLink {
  std::string id;
  int capacity = 0;
};

struct CircuitRoute {
  std::vector<std::size_t> links;  // indices into CircuitNetworkSpec::links
  double offered = 0.0;
};

struct CircuitNetworkSpec {
  std::vector<CircuitLink> links;
  std::vector<CircuitRoute> routes;
  void validate() const;
};

struct EfpaOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  double damping = 1.0;  // weight on the new iterate
};

struct EfpaResult {
  std::vector<double> link_blocking;
  std::vector<double> link_offered;  // reduced load a_j at the fixed point
  std::vector<double> route_blocking;
  int iterations;
  double residual;  // max link-B change in the last round
};

EfpaResult efpa_solve(const CircuitNetworkSpec& spec, const EfpaOptions& opt = {});

struct OpticalParams {
  double lambda;   // connection arrival rate, r/b
  double holding;  // mean holding time, b/(cU)
  double offered;  // erlangs, r/(cU)
};

// r: offered bit rate, b: mean burst size, c: channel rate, U: utilisation.
OpticalParams convert_params(double r, double b, double c, double U);

}  // namespace teletraffic
