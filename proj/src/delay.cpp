#include "teletraffic/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"
#include "teletraffic/rng.hpp"

namespace teletraffic {

namespace {

void check_rates(double lambda, double mu) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("arrival rate must be non-negative");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("service rate must be positive");
}

std::vector<double> geometric_dist(double rho, double tail_tol) {
  std::vector<double> d;
  double p = 1.0 - rho;
  double tail = 1.0;  // P(Q >= i)
  for (std::size_t i = 0; tail >= tail_tol && i < 100000000; ++i) {
    d.push_back(p);
    p *= rho;
    tail *= rho;
  }
  return d;
}

}  // namespace

ServiceSpec ServiceSpec::exponential(double mean) {
  if (!(mean > 0.0)) throw ParameterError("mean service time must be positive");
  return {mean, 2.0 * (mean * mean), ServiceKind::exponential};
}

ServiceSpec ServiceSpec::deterministic(double mean) {
  if (!(mean > 0.0)) throw ParameterError("mean service time must be positive");
  return {mean, mean * mean, ServiceKind::deterministic};
}

ServiceSpec ServiceSpec::from_variance(double mean, double variance) {
  if (!(mean > 0.0)) throw ParameterError("mean service time must be positive");
  if (!(variance >= 0.0)) throw ParameterError("service variance must be non-negative");
  return {mean, variance + mean * mean, ServiceKind::general};
}

ServiceSpec ServiceSpec::from_moments(double mean, double second_moment) {
  if (!(mean > 0.0)) throw ParameterError("mean service time must be positive");
  if (!(second_moment >= mean * mean * (1.0 - 1e-12))) throw ParameterError("second moment below squared mean");
  return {mean, second_moment, ServiceKind::general};
}

QueueMetrics mm1_metrics(double lambda, double mu, double tail_tol) {
  check_rates(lambda, mu);
  if (lambda >= mu) throw InstabilityError("M/M/1 unstable: lambda >= mu");
  const double rho = lambda / mu;
  QueueMetrics m;
  m.arrival_rate = lambda;
  m.state_dist = geometric_dist(rho, tail_tol);
  m.mean_queue = rho / (1.0 - rho);
  m.mean_in_service = rho;
  m.mean_waiting = rho * rho / (1.0 - rho);
  m.mean_delay = 1.0 / (mu - lambda);
  m.mean_wait = rho / (mu - lambda);
  m.utilization = rho;
  m.delay_prob = rho;
  m.delayed_mean_wait = 1.0 / (mu - lambda);
  m.delayed_mean_delay = 1.0 / (mu - lambda) + 1.0 / mu;
  m.busy_period = 1.0 / (mu - lambda);
  return m;
}

DelayTail mm1_delay_ccdf(double lambda, double mu, double t) {
  check_rates(lambda, mu);
  if (lambda >= mu) throw InstabilityError("M/M/1 unstable: lambda >= mu");
  if (!(t >= 0.0)) throw ParameterError("t must be non-negative");
  const double e = std::exp(-(mu - lambda) * t);
  return {e, (lambda / mu) * e};
}

MmInfMetrics mminf_metrics(double lambda, double mu, double tail_tol) {
  check_rates(lambda, mu);
  const double A = lambda / mu;
  const Pmf p = poisson_pmf(A, tail_tol);
  return {A, A, p.support_min, p.probabilities};
}

double mminf_no_collision_probability(double lambda, double mu) {
  check_rates(lambda, mu);
  return std::exp(-lambda / mu) * mu / (lambda + mu);
}

double mminf_arrival_rate(double mean_population, double mean_holding) {
  if (!(mean_population >= 0.0) || !(mean_holding > 0.0)) throw ParameterError("need population >= 0 and holding time > 0");
  return mean_population / mean_holding;
}

double erlang_c(double A, int k) {
  if (k < 1) throw ParameterError("Erlang C needs k >= 1");
  if (!(A >= 0.0)) throw ParameterError("offered load must be non-negative");
  if (A >= k) throw InstabilityError("M/M/k unstable: A >= k");
  const double E = erlang_b(A, k);
  return k * E / (k - A * (1.0 - E));
}

double mmk_delay_factor(double A, int k) { return erlang_c(A, k) / (k - A); }

QueueMetrics mmk_metrics(double lambda, double mu, int k, double tail_tol) {
  check_rates(lambda, mu);
  if (k < 1) throw ParameterError("M/M/k needs k >= 1");
  const double A = lambda / mu;
  if (A >= k) throw InstabilityError("M/M/k unstable: A >= k");
  const double C = erlang_c(A, k);
  const double rho = A / k;
  QueueMetrics m;
  m.arrival_rate = lambda;
  m.delay_prob = C;
  m.mean_waiting = C * A / (k - A);
  m.mean_in_service = A;
  m.mean_queue = m.mean_waiting + A;
  m.mean_wait = C / (k * mu - lambda);
  m.mean_delay = m.mean_wait + 1.0 / mu;
  m.utilization = rho;
  m.delayed_mean_wait = 1.0 / (k * mu - lambda);
  m.delayed_mean_delay = *m.delayed_mean_wait + 1.0 / mu;
  if (A == 0.0) {
    m.state_dist = {1.0};
  } else {
    std::vector<double> below(static_cast<std::size_t>(k));
    double p = C * (1.0 - rho);  // pi_k
    const double pk = p;
    for (int i = k - 1; i >= 0; --i) {
      p *= (i + 1) / A;
      below[static_cast<std::size_t>(i)] = p;
    }
    m.state_dist = below;
    double tail = C;
    p = pk;
    while (tail >= tail_tol) {
      m.state_dist.push_back(p);
      tail -= p;
      p *= rho;
      if (p == 0.0) break;
    }
  }
  return m;
}

namespace {

QueueMetrics finite_metrics(double lambda, double mu, int k, std::vector<double> dist, double delay_prob, double mean_waiting,
                            double mean_in_service) {
  QueueMetrics m;
  m.arrival_rate = lambda;
  m.blocking = dist.back();
  m.delay_prob = delay_prob;
  m.mean_waiting = mean_waiting;
  m.mean_in_service = mean_in_service;
  m.mean_queue = m.mean_waiting + m.mean_in_service;
  m.utilization = m.mean_in_service / k;
  const double lam_eff = lambda * (1.0 - dist.back());
  if (lam_eff > 0.0) {
    m.mean_delay = m.mean_queue / lam_eff;
    m.mean_wait = m.mean_waiting / lam_eff;
  } else {
    m.mean_delay = 1.0 / mu;
    m.mean_wait = 0.0;
  }
  if (delay_prob > 0.0) {
    m.delayed_mean_wait = m.mean_waiting / (lambda * delay_prob);
    m.delayed_mean_delay = *m.delayed_mean_wait + 1.0 / mu;
  }
  m.state_dist = std::move(dist);
  return m;
}

}  // namespace

QueueMetrics mm1n_metrics(double lambda, double mu, int N) {
  check_rates(lambda, mu);
  if (N < 1) throw ParameterError("M/M/1/N needs N >= 1");
  const double rho = lambda / mu;
  std::vector<double> d(static_cast<std::size_t>(N) + 1);
  if (rho == 1.0) {
    std::fill(d.begin(), d.end(), 1.0 / (N + 1));
  } else if (rho == 0.0) {
    d[0] = 1.0;
  } else if (rho < 1.0) {
    // rho^i (1 - rho) / (1 - rho^{N+1})
    const double lr = std::log(rho);
    const double c = std::expm1(lr) / std::expm1((N + 1) * lr);
    for (int i = 0; i <= N; ++i) d[static_cast<std::size_t>(i)] = std::exp(i * lr) * c;
  } else {
    // Reversed geometric in r = 1/rho: r^{N-i} (1 - r) / (1 - r^{N+1})
    const double lr = -std::log(rho);
    const double c = std::expm1(lr) / std::expm1((N + 1) * lr);
    for (int i = 0; i <= N; ++i) d[static_cast<std::size_t>(i)] = std::exp((N - i) * lr) * c;
  }
  double eq = 0.0;
  for (int i = 0; i <= N; ++i) eq += i * d[static_cast<std::size_t>(i)];
  const double busy = 1.0 - d[0];
  const double delay_prob = std::max(0.0, 1.0 - d[0] - d.back());
  return finite_metrics(lambda, mu, 1, std::move(d), delay_prob, eq - busy, busy);
}

double mmkn_pi0(double A, int k, int N) {
  if (k < 1 || N < k) throw ParameterError("M/M/k/N needs 1 <= k <= N");
  const double rho = A / k;
  double s = 0.0, term = 1.0;
  for (int i = 0; i < k; ++i) {
    s += term;
    term *= A / (i + 1);
  }
  // term is now A^k / k!
  if (rho == 1.0) return 1.0 / (s + term * (N - k + 1));
  return 1.0 / (s + term * (1.0 - std::pow(rho, N - k + 1)) / (1.0 - rho));
}

QueueMetrics mmkn_metrics(double lambda, double mu, int k, int N) {
  check_rates(lambda, mu);
  if (k < 1 || N < k) throw ParameterError("M/M/k/N needs 1 <= k <= N");
  const double A = lambda / mu;
  const double rho = A / k;
  std::vector<double> d(static_cast<std::size_t>(N) + 1, 0.0);
  if (A == 0.0) {
    d[0] = 1.0;
  } else {
    std::vector<double> logw(d.size());
    for (int i = 0; i <= N; ++i)
      logw[static_cast<std::size_t>(i)] = i <= k ? i * std::log(A) - std::lgamma(i + 1.0)
                                                 : logw[static_cast<std::size_t>(k)] + (i - k) * std::log(rho);
    const double top = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) total += (d[i] = std::exp(logw[i] - top));
    for (double& p : d) p /= total;
  }
  const double pk = d[static_cast<std::size_t>(k)];
  const int L = N - k;
  double delay_prob = 0.0, nq = 0.0;
  const bool closed = rho == 1.0 || (std::abs(1.0 - rho) > 1e-3 && std::abs(L * std::log(rho)) < 600.0);
  if (A > 0.0 && closed) {
    if (rho == 1.0) {
      delay_prob = pk * L;
      nq = pk * L * (L + 1) / 2.0;
    } else {
      const double rL = std::pow(rho, L);
      delay_prob = pk * (1.0 - rL) / (1.0 - rho);
      nq = pk * rho * (1.0 - (L + 1) * rL + L * rL * rho) / ((1.0 - rho) * (1.0 - rho));
    }
  } else {
    for (int i = k; i < N; ++i) delay_prob += d[static_cast<std::size_t>(i)];
    for (int i = k + 1; i <= N; ++i) nq += (i - k) * d[static_cast<std::size_t>(i)];
  }
  const double ns = A * (1.0 - d.back());
  return finite_metrics(lambda, mu, k, std::move(d), delay_prob, nq, ns);
}

Mg1Metrics mg1_metrics(double lambda, const ServiceSpec& s) {
  if (!(lambda >= 0.0)) throw ParameterError("arrival rate must be non-negative");
  if (!(s.mean > 0.0) || s.second_moment < s.mean * s.mean * (1.0 - 1e-12)) throw ParameterError("invalid service moments");
  const double rho = lambda * s.mean;
  if (rho >= 1.0) throw InstabilityError("M/G/1 unstable: rho >= 1");
  Mg1Metrics m;
  m.rho = rho;
  m.mean_residual = 0.5 * lambda * s.second_moment;
  m.mean_wait = m.mean_residual / (1.0 - rho);
  m.mean_delay = m.mean_wait + s.mean;
  m.mean_queue = lambda * m.mean_delay;
  m.mean_waiting = lambda * m.mean_wait;
  m.busy_period = s.mean / (1.0 - rho);
  return m;
}

std::vector<ClassDelay> mg1_priority_nonpreemptive(const std::vector<PriorityClass>& classes) {
  double R = 0.0, total_rho = 0.0;
  for (const auto& c : classes) {
    if (!(c.arrival_rate >= 0.0) || !(c.service.mean > 0.0)) throw ParameterError("invalid priority class");
    R += 0.5 * c.arrival_rate * c.service.second_moment;
    total_rho += c.arrival_rate * c.service.mean;
  }
  if (total_rho >= 1.0) throw InstabilityError("priority M/G/1 unstable: total load >= 1");
  std::vector<ClassDelay> out;
  double sigma_prev = 0.0;
  for (const auto& c : classes) {
    const double sigma = sigma_prev + c.arrival_rate * c.service.mean;
    const double w = R / ((1.0 - sigma_prev) * (1.0 - sigma));
    out.push_back({w, w + c.service.mean});
    sigma_prev = sigma;
  }
  return out;
}

std::vector<ClassDelay> mg1_priority_preemptive_resume(const std::vector<PriorityClass>& classes) {
  std::vector<ClassDelay> out;
  double sigma_prev = 0.0, R = 0.0;
  for (const auto& c : classes) {
    if (!(c.arrival_rate >= 0.0) || !(c.service.mean > 0.0)) throw ParameterError("invalid priority class");
    const double sigma = sigma_prev + c.arrival_rate * c.service.mean;
    R += 0.5 * c.arrival_rate * c.service.second_moment;
    if (sigma >= 1.0) {
      out.push_back({std::nullopt, std::nullopt});
    } else {
      const double d = (c.service.mean * (1.0 - sigma) + R) / ((1.0 - sigma_prev) * (1.0 - sigma));
      out.push_back({d - c.service.mean, d});
    }
    sigma_prev = sigma;
  }
  return out;
}

PsMetrics ps_metrics(double lambda, double mean_service, double tail_tol) {
  if (!(mean_service > 0.0)) throw ParameterError("mean service time must be positive");
  if (!(lambda >= 0.0)) throw ParameterError("arrival rate must be non-negative");
  const double rho = lambda * mean_service;
  if (rho >= 1.0) throw InstabilityError("processor sharing queue unstable: rho >= 1");
  return {rho, rho / (1.0 - rho), mean_service / (1.0 - rho), geometric_dist(rho, tail_tol)};
}

double ps_conditional_delay(double lambda, double mean_service, double x) {
  if (!(x >= 0.0)) throw ParameterError("job size must be non-negative");
  const PsMetrics m = ps_metrics(lambda, mean_service, 1e-3);
  return x / (1.0 - m.rho);
}

QueueMetrics lifo_metrics(double lambda, double mu) {
  QueueMetrics m = mm1_metrics(lambda, mu);
  // Conditional delay of a delayed customer depends on the discipline.
  m.delayed_mean_delay.reset();
  m.delayed_mean_wait.reset();
  return m;
}

WongCheck wong_bound_check(double rho, double p_loss, double p_overflow) {
  for (double v : {rho, p_loss, p_overflow})
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("Wong check inputs must lie in [0,1]");
  const double slack = p_overflow - rho * p_loss;
  return {slack >= 0.0, slack};
}

double mg1_setup_busy_period(double lambda, double mean_service, double zeta) {
  if (!(lambda > 0.0) || !(mean_service > 0.0) || !(zeta > 0.0)) throw ParameterError("rates must be positive");
  const double rho = lambda * mean_service;
  if (rho >= 1.0) throw InstabilityError("M/G/1 unstable: rho >= 1");
  return rho * (1.0 / lambda + 1.0 / zeta) / (1.0 - rho);
}

}  // namespace teletraffic
