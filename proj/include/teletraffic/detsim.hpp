#pragma once

#include <cstddef>
#include <optional>

#include "teletraffic/deterministic.hpp"

namespace teletraffic {

// Exact event-driven simulation of a deterministic G/G/k/N queue with
// rational inter-arrival and service times. Arrivals at 0, a, 2a, ...;
// departures before arrivals on ties; FIFO.
struct DetSimConfig {
  Rational interarrival{1};
  Rational service{1};
  int servers = 1;
  std::optional<int> capacity;  // total in system
  std::size_t max_arrivals = 2000000;
  std::size_t verify_cycles = 100;  // extra cycles replayed and compared
};

struct DetSimReport {
  DeterministicResult result;
  std::size_t transient_arrivals = 0;
  std::size_t cycle_arrivals = 0;  // arrivals per repeating pattern
  std::size_t cycles_verified = 0;
};

DetSimReport det_simulate(const DetSimConfig& cfg);

// Convenience wrapper taking rates, matching the closed-form signatures.
DeterministicResult det_simulate_rates(const Rational& lambda, const Rational& mu, int servers, std::optional<int> capacity);

}  // namespace teletraffic
