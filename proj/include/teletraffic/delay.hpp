#pragma once

#include <optional>
#include <vector>

namespace teletraffic {

struct QueueMetrics {
  double arrival_rate = 0.0;
  std::optional<double> blocking;  // finite buffers only
  std::vector<double> state_dist;  // truncated where the tail is below 1e-12 for infinite buffers
  double mean_queue = 0.0;         // E[Q]
  double mean_waiting = 0.0;       // E[N_Q]
  double mean_in_service = 0.0;    // E[N_s]
  double mean_delay = 0.0;         // E[D]
  double mean_wait = 0.0;          // E[W_Q]
  double utilization = 0.0;
  double delay_prob = 0.0;         // P(an arrival waits), over all arrivals
  std::optional<double> delayed_mean_delay;  // E[D^], delayed customers only
  std::optional<double> delayed_mean_wait;   // E[W_Q^]
  std::optional<double> busy_period;

  double effective_arrival_rate() const { return arrival_rate * (1.0 - blocking.value_or(0.0)); }
};

enum class ServiceKind { exponential, deterministic, general };

struct ServiceSpec {
  double mean = 1.0;
  double second_moment = 2.0;
  ServiceKind kind = ServiceKind::exponential;

  double variance() const { return second_moment - mean * mean; }
  double rate() const { return 1.0 / mean; }

  static ServiceSpec exponential(double mean);
  static ServiceSpec deterministic(double mean);
  static ServiceSpec from_variance(double mean, double variance);
  static ServiceSpec from_moments(double mean, double second_moment);
};

QueueMetrics mm1_metrics(double lambda, double mu, double tail_tol = 1e-12);

struct DelayTail {
  double delay;  // P(D > t)
  double wait;   // P(W_Q > t)
};
DelayTail mm1_delay_ccdf(double lambda, double mu, double t);

struct MmInfMetrics {
  double offered;
  double mean_queue;
  long support_min;
  std::vector<double> state_dist;
};
MmInfMetrics mminf_metrics(double lambda, double mu, double tail_tol = 1e-12);
// Probability that an arrival finds the system empty and the system stays
// empty until that customer leaves: e^{-A} mu / (lambda + mu).
double mminf_no_collision_probability(double lambda, double mu);
// Arrival rate that keeps a mean population at a given mean holding time.
double mminf_arrival_rate(double mean_population, double mean_holding);

double erlang_c(double A, int k);
QueueMetrics mmk_metrics(double lambda, double mu, int k, double tail_tol = 1e-12);
double mmk_delay_factor(double A, int k);

QueueMetrics mm1n_metrics(double lambda, double mu, int N);
QueueMetrics mmkn_metrics(double lambda, double mu, int k, int N);
// Closed-form empty-system probability of M/M/k/N (rho = 1 handled apart).
double mmkn_pi0(double A, int k, int N);

struct Mg1Metrics {
  double rho;
  double mean_residual;  // E[R]
  double mean_wait;
  double mean_delay;
  double mean_queue;
  double mean_waiting;
  double busy_period;
};
Mg1Metrics mg1_metrics(double lambda, const ServiceSpec& service);

struct PriorityClass {
  double arrival_rate;
  ServiceSpec service;
};

struct ClassDelay {
  std::optional<double> mean_wait;   // absent when the class is unstable
  std::optional<double> mean_delay;
};

// Class 0 is the highest priority.
std::vector<ClassDelay> mg1_priority_nonpreemptive(const std::vector<PriorityClass>& classes);
std::vector<ClassDelay> mg1_priority_preemptive_resume(const std::vector<PriorityClass>& classes);

struct PsMetrics {
  double rho;
  double mean_queue;
  double mean_delay;
  std::vector<double> state_dist;
};
PsMetrics ps_metrics(double lambda, double mean_service, double tail_tol = 1e-12);
double ps_conditional_delay(double lambda, double mean_service, double x);

// LIFO: same queue-size law and means as FIFO M/M/1; no delay distribution.
QueueMetrics lifo_metrics(double lambda, double mu);

struct WongCheck {
  bool holds;
  double slack;  // P(Q > k) - rho * P_loss
};
WongCheck wong_bound_check(double rho, double p_loss, double p_overflow);

// Mean busy period when the first customer of a busy period waits an extra
// exponential set-up time of rate zeta: solves E[T]/(E[T] + 1/lambda + 1/zeta) = rho.
double mg1_setup_busy_period(double lambda, double mean_service, double zeta);

}  // namespace teletraffic
