#pragma once

#include <cstddef>
#include <vector>

namespace teletraffic {

struct ServiceClass {
  int slots = 1;  // servers held per call
  double arrival_rate = 0.0;
  double mean_holding_time = 1.0;

  double erlangs() const { return arrival_rate * mean_holding_time; }
};

struct FeasibleStateSet {
  std::vector<std::vector<int>> states;  // calls in progress per class, lexicographic
  std::vector<double> probabilities;
};

constexpr std::size_t kMaxEnumeratedStates = 10000000;

FeasibleStateSet ms_enumerate_solve(const std::vector<ServiceClass>& classes, int k);
std::vector<double> ms_blocking(const std::vector<ServiceClass>& classes, int k);
// Occupancy recursion j q(j) = sum_i A_i s_i q(j - s_i).
std::vector<double> ms_occupancy_distribution(const std::vector<ServiceClass>& classes, int k);
std::vector<double> ms_occupancy_recursion(const std::vector<ServiceClass>& classes, int k);

struct CriticalProbeRow {
  int k;
  std::vector<double> blocking;
  std::vector<double> scaled;  // B(i) sqrt(k) / s_i
};

// Scales the class loads so that sum_i A_i s_i = k at every k and reports
// the blocking of each class.
std::vector<CriticalProbeRow> ms_critical_scaling_probe(const std::vector<ServiceClass>& classes, const std::vector<int>& ks);

}  // namespace teletraffic
