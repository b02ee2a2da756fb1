#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "teletraffic/rng.hpp"
#include "teletraffic/sim.hpp"

namespace teletraffic {

// Event times of a Poisson process on (0, horizon].
std::vector<double> poisson_arrivals(double lambda, double horizon, RngStream& stream);
std::vector<double> superpose(const std::vector<double>& a, const std::vector<double>& b);
// Each event goes to the first stream with probability p.
std::pair<std::vector<double>, std::vector<double>> split(const std::vector<double>& times, double p, RngStream& stream);
// Counts per unit-length window over (0, horizon].
std::vector<double> window_counts(const std::vector<double>& times, double width, double horizon);

// Mode m lasts Exp(psi * delta_m) and emits Poisson arrivals at lambda_m.
struct Mmpp2Params {
  double lambda0 = 1.0, lambda1 = 1.0;
  double delta0 = 1.0, delta1 = 1.0;
  double psi = 1.0;

  void validate() const;
  double lambda_av() const;
  double mode_prob(int m) const;
};

struct Mmpp2Trace {
  std::vector<double> times;
  std::vector<int> modes;                // mode at each arrival
  std::vector<double> switch_times;      // mode changes
  int initial_mode = 0;
};

// Initial mode drawn from the stationary mode distribution.
Mmpp2Trace mmpp2_arrivals(const Mmpp2Params& p, double horizon, RngStream& stream);
// Inter-arrival source for the simulator; keeps its own mode state.
Deviate mmpp2_source(const Mmpp2Params& p);

struct Ar1Params {
  double a = 0.0, b = 0.0, eta = 0.0;
  double mean() const { return b * eta / (1.0 - a); }
  double variance() const { return b * b / (1.0 - a * a); }
};

// a = S/(S+var), b = sqrt(var (1 - a^2)), eta = (1-a) mean / b.
Ar1Params ar1_fit(double mean, double variance, double autocov_sum);
// X_n = a X_{n-1} + b G_n with G_n ~ N(eta, 1); 10 ceil(1/(1-a)) slots of
// warm-up are discarded.
std::vector<double> ar1_generate(const Ar1Params& p, std::size_t n, RngStream& stream);

// D_n = a D_{n-1} + I_n E_n with D_0 ~ Exp(lambda).
std::vector<double> ear1_interarrivals(double lambda, double a, std::size_t n, RngStream& stream);
Deviate ear1_source(double lambda, double a);

struct PpbpParams {
  double lambda = 1.0;  // burst starts per slot
  double r = 1.0;       // work per slot while active
  double gamma = 1.5;   // Pareto shape of the burst duration
  double delta = 2.0 / 3.0;

  static PpbpParams from_hurst(double lambda, double r, double H);
  double hurst() const { return (3.0 - gamma) / 2.0; }
  double mean_duration() const { return gamma * delta / (gamma - 1.0); }
  double mean_workload() const { return lambda * r * mean_duration(); }
  void validate() const;
};

// Per-slot work. A burst active for a fraction f of a slot contributes f r.
// Bursts starting up to warmup_slots before slot 0 are included (default
// 10 n).
std::vector<double> ppbp_workload(const PpbpParams& p, std::size_t n, RngStream& stream, std::size_t warmup_slots = 0);

// Queue content of a slotted single-server queue fed with per-slot work and
// draining c per slot (Lindley recursion).
std::vector<double> slotted_queue(const std::vector<double>& work, double c);

void write_trace(const std::string& path, const std::vector<double>& values);
std::vector<double> read_trace(const std::string& path);

}  // namespace teletraffic
