#pragma once

#include <optional>
#include <vector>

namespace teletraffic {

struct TrafficLoad {
  double arrival_rate = 0.0;
  double mean_holding_time = 1.0;

  double erlangs() const { return arrival_rate * mean_holding_time; }
  static TrafficLoad from_rates(double lambda, double mu) { return {lambda, 1.0 / mu}; }
};

struct OverflowTraffic {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> peakedness;  // absent when mean == 0
};

struct LossResult {
  double offered = 0.0;
  double blocking = 0.0;
  double carried = 0.0;
  double overflow = 0.0;
  double utilization = 0.0;
  std::vector<double> state_dist;
};

// Erlang B by the forward recursion E_m = A E_{m-1} / (m + A E_{m-1}).
double erlang_b(double A, int k);
// One forward step: E_k from a known E_{k-1}.
double erlang_b_next(double A, int k, double previous);
// Same value via I_m = 1 + (m/A) I_{m-1}, E_k = 1/I_k.
double erlang_b_inverse_recursion(double A, int k);
// Same value via I_k(A) = A * int_0^inf exp(-A y) (1+y)^k dy, by adaptive
// Gauss-Kronrod quadrature on t = A y.
double erlang_b_jagerman(double A, int k, double rel_tol = 1e-10);
// E_k for every k in 0..kmax in one pass.
std::vector<double> erlang_b_table(double A, int kmax);

LossResult mmkk_stats(double A, int k);

OverflowTraffic overflow_of(double A, int k);

enum class NeqRounding { nearest, conservative };

struct ErmEquivalent {
  double a_eq;
  double n_eq_exact;
  int n_eq;
};

ErmEquivalent erm_equivalent(double M, double V, NeqRounding rounding = NeqRounding::nearest);
double erm_blocking(double M, double V, int k2, NeqRounding rounding = NeqRounding::nearest);
double hayward_blocking(double M, double V, int k2);

// Engset call congestion for M sources, k servers, idle-source intensity rho_hat.
double engset_blocking(int M, int k, double rho_hat);

struct EngsetLoads {
  double blocking;
  double intended;
  double offered;
  double carried;
  std::vector<double> state_dist;
};

EngsetLoads engset_loads(int M, int k, double rho_hat);
// Solve for blocking given the offered load T_o by iterating
// rho_hat = T_o / (M - T_o (1 - P_b)).
double engset_from_offered(int M, int k, double offered, double tol = 1e-12, int max_iter = 100000);

double multiclass_erlang_b(const std::vector<TrafficLoad>& loads, int k);

// Per-class blocking, class 0 highest priority. Classes with zero load
// get no value.
std::vector<std::optional<double>> mmkk_preemptive_priority(const std::vector<double>& loads, int k);

// Fluid estimate (A - k)/A for an overloaded group.
double saturated_blocking(double lambda, double mu, int k);

}  // namespace teletraffic
