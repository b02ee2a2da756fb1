#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "teletraffic/delay.hpp"
#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"

using namespace teletraffic;

TEST_CASE("M/M/1 worked example") {
  const QueueMetrics m = mm1_metrics(2e6, 2.1e6);
  CHECK(m.mean_queue == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(m.mean_delay == doctest::Approx(1e-5).epsilon(1e-12));
  REQUIRE(m.delayed_mean_delay);
  CHECK(*m.delayed_mean_delay == doctest::Approx(1e-5 + 1 / 2.1e6).epsilon(1e-12));
  CHECK(m.utilization == doctest::Approx(2.0 / 2.1));
}

TEST_CASE("M/M/1 identities") {
  for (double rho : {0.1, 0.5, 0.9, 0.99}) {
    const QueueMetrics m = mm1_metrics(rho * 3.0, 3.0);
    CHECK(m.mean_queue == doctest::Approx(rho / (1 - rho)));
    CHECK(m.mean_queue == doctest::Approx(m.arrival_rate * m.mean_delay));
    CHECK(m.mean_waiting == doctest::Approx(m.arrival_rate * m.mean_wait));
    CHECK(m.mean_queue == doctest::Approx(m.mean_waiting + m.mean_in_service));
    CHECK(m.delay_prob == doctest::Approx(rho));
    const double mass = std::accumulate(m.state_dist.begin(), m.state_dist.end(), 0.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-11));
  }
  CHECK_THROWS_AS(mm1_metrics(3.0, 3.0), InstabilityError);
  CHECK_THROWS_AS(mm1_metrics(-1.0, 3.0), ParameterError);
}

TEST_CASE("M/M/1 delay tail") {
  const DelayTail t = mm1_delay_ccdf(1.0, 2.0, 0.7);
  CHECK(t.delay == doctest::Approx(std::exp(-0.7)));
  CHECK(t.wait == doctest::Approx(0.5 * std::exp(-0.7)));
}

TEST_CASE("M/M/k against Erlang C and a truncated chain") {
  const double lambda = 9.0, mu = 1.0;
  const int k = 12;
  const QueueMetrics m = mmk_metrics(lambda, mu, k);
  CHECK(erlang_c(9.0, k) == doctest::Approx(oracle::erlang_c_sum(9.0, k)).epsilon(1e-12));
  CHECK(m.delay_prob == doctest::Approx(erlang_c(9.0, k)));
  const double E = erlang_b(9.0, k);
  CHECK(1.0 / erlang_c(9.0, k) == doctest::Approx(1.0 / E - 1.0 / erlang_b(9.0, k - 1)).epsilon(1e-10));
  // A long M/M/k/N approaches M/M/k.
  const QueueMetrics f = mmkn_metrics(lambda, mu, k, 400);
  CHECK(f.mean_queue == doctest::Approx(m.mean_queue).epsilon(1e-9));
  CHECK(m.mean_wait == doctest::Approx(erlang_c(9.0, k) / (k * mu - lambda)));
  CHECK(mmk_delay_factor(9.0, k) == doctest::Approx(erlang_c(9.0, k) / (k - 9.0)));
  REQUIRE(m.delayed_mean_wait);
  CHECK(*m.delayed_mean_wait == doctest::Approx(1.0 / (k * mu - lambda)));
}

TEST_CASE("Erlang C golden column") {
  // Frozen from the state-sum oracle.
  CHECK(erlang_c(20, 30) == doctest::Approx(0.02495045810).epsilon(1e-9));
  CHECK(erlang_c(1000, 1029) == doctest::Approx(0.2627043038).epsilon(1e-8));
  CHECK_THROWS_AS(erlang_c(9970.0 + 30, 9970), InstabilityError);
}

TEST_CASE("M/M/1/N closed form and chain agree") {
  for (double rho : {0.3, 1.0, 1.7})
    for (int N : {1, 4, 25}) {
      const QueueMetrics m = mm1n_metrics(rho, 1.0, N);
      std::vector<double> b(static_cast<std::size_t>(N), rho), d(static_cast<std::size_t>(N), 1.0);
      const auto pi = oracle::stationary(oracle::bd_generator(b, d));
      REQUIRE(m.blocking);
      CHECK(*m.blocking == doctest::Approx(pi.back()).epsilon(1e-10));
      double q = 0.0;
      for (std::size_t i = 0; i < pi.size(); ++i) q += static_cast<double>(i) * pi[i];
      CHECK(m.mean_queue == doctest::Approx(q).epsilon(1e-10));
      CHECK(m.mean_queue == doctest::Approx(m.effective_arrival_rate() * m.mean_delay).epsilon(1e-12));
    }
}

TEST_CASE("M/M/1/N saturation") {
  const QueueMetrics m = mm1n_metrics(1000.0, 1.0, 1000);
  CHECK(*m.blocking == doctest::Approx(0.999).epsilon(1e-6));
  CHECK(*m.blocking == doctest::Approx(saturated_blocking(1000.0, 1.0, 1)).epsilon(1e-6));
}

TEST_CASE("M/M/k/N closed form and chain agree") {
  for (double A : {2.0, 6.0, 11.0})
    for (auto [k, N] : {std::pair{3, 3}, std::pair{5, 9}, std::pair{6, 40}}) {
      const QueueMetrics m = mmkn_metrics(A, 1.0, k, N);
      std::vector<double> b(static_cast<std::size_t>(N), A), d;
      for (int i = 1; i <= N; ++i) d.push_back(std::min(i, k));
      const auto pi = oracle::stationary(oracle::bd_generator(b, d));
      CHECK(*m.blocking == doctest::Approx(pi.back()).epsilon(1e-10));
      double wq = 0.0;
      for (int i = k + 1; i <= N; ++i) wq += (i - k) * pi[static_cast<std::size_t>(i)];
      CHECK(m.mean_waiting == doctest::Approx(wq).epsilon(1e-9));
      if (k == N) CHECK(*m.blocking == doctest::Approx(erlang_b(A, k)).epsilon(1e-12));
      CHECK(mmkn_pi0(A, k, N) == doctest::Approx(pi[0]).epsilon(1e-10));
    }
}

TEST_CASE("M/M/infinity") {
  const MmInfMetrics m = mminf_metrics(6.0, 2.0);
  CHECK(m.offered == 3.0);
  CHECK(m.mean_queue == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(mminf_no_collision_probability(6.0, 2.0) == doctest::Approx(std::exp(-3.0) * 2.0 / 8.0));
  CHECK(mminf_arrival_rate(10.0, 2.0) == doctest::Approx(5.0));
}

TEST_CASE("M/G/1 Pollaczek-Khinchine") {
  const Mg1Metrics m = mg1_metrics(1.5, ServiceSpec::from_variance(0.4, 0.2));
  CHECK(m.mean_queue == doctest::Approx(1.6125).epsilon(1e-12));
  CHECK(m.mean_queue == doctest::Approx(1.5 * m.mean_delay));
  // Exponential service reproduces M/M/1.
  const Mg1Metrics e = mg1_metrics(0.7, ServiceSpec::exponential(1.0));
  CHECK(e.mean_queue == doctest::Approx(mm1_metrics(0.7, 1.0).mean_queue));
  CHECK(e.busy_period == doctest::Approx(1.0 / 0.3));
}

TEST_CASE("M/D/1 waits half as long as M/M/1") {
  for (double rho = 0.05; rho < 0.99; rho += 0.05) {
    const Mg1Metrics d = mg1_metrics(rho, ServiceSpec::deterministic(1.0));
    const Mg1Metrics m = mg1_metrics(rho, ServiceSpec::exponential(1.0));
    CHECK(d.mean_wait == doctest::Approx(0.5 * m.mean_wait).epsilon(1e-12));
  }
}

TEST_CASE("priority queues") {
  const std::vector<PriorityClass> cls{{0.2, ServiceSpec::exponential(1.0)}, {0.3, ServiceSpec::deterministic(1.0)}, {0.1, ServiceSpec::from_variance(2.0, 3.0)}};
  double rho = 0.0, R = 0.0;
  for (const auto& c : cls) {
    rho += c.arrival_rate * c.service.mean;
    R += 0.5 * c.arrival_rate * c.service.second_moment;
  }
  SUBCASE("non-preemptive conservation law") {
    const auto w = mg1_priority_nonpreemptive(cls);
    double lhs = 0.0;
    for (std::size_t i = 0; i < cls.size(); ++i) lhs += cls[i].arrival_rate * cls[i].service.mean * *w[i].mean_wait;
    CHECK(lhs == doctest::Approx(rho * R / (1 - rho)).epsilon(1e-12));
  }
  SUBCASE("preemptive top class ignores the rest") {
    const auto w = mg1_priority_preemptive_resume(cls);
    const Mg1Metrics alone = mg1_metrics(0.2, ServiceSpec::exponential(1.0));
    CHECK(*w[0].mean_delay == doctest::Approx(alone.mean_delay));
    CHECK(*w[2].mean_delay > *w[1].mean_delay);
  }
  SUBCASE("overload") {
    const std::vector<PriorityClass> heavy{{0.5, ServiceSpec::exponential(1.0)}, {0.6, ServiceSpec::exponential(1.0)}};
    CHECK_THROWS_AS(mg1_priority_nonpreemptive(heavy), InstabilityError);
    const auto w = mg1_priority_preemptive_resume(heavy);
    CHECK(w[0].mean_delay.has_value());
    CHECK_FALSE(w[1].mean_delay.has_value());
  }
}

TEST_CASE("processor sharing example") {
  const PsMetrics m = ps_metrics(0.8 / 4e-6, 4e-6);
  CHECK(m.mean_queue == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(m.mean_delay == doctest::Approx(20e-6).epsilon(1e-12));
  CHECK(ps_conditional_delay(0.8 / 4e-6, 4e-6, 16e-6) == doctest::Approx(80e-6).epsilon(1e-12));
}

TEST_CASE("LIFO shares the M/M/1 means") {
  const QueueMetrics l = lifo_metrics(0.6, 1.0);
  const QueueMetrics f = mm1_metrics(0.6, 1.0);
  CHECK(l.mean_queue == doctest::Approx(f.mean_queue));
  CHECK(l.mean_delay == doctest::Approx(f.mean_delay));
  CHECK_FALSE(l.delayed_mean_delay.has_value());
}

TEST_CASE("Wong bound on the analytic grid") {
  for (double rho = 0.05; rho < 1.0; rho += 0.05)
    for (int k = 1; k <= 40; ++k) {
      const double loss = *mm1n_metrics(rho, 1.0, k).blocking;
      const WongCheck w = wong_bound_check(rho, loss, std::pow(rho, k + 1));
      CHECK(w.holds);
    }
  CHECK_THROWS_AS(wong_bound_check(1.5, 0.1, 0.1), ParameterError);
}

TEST_CASE("busy period with set-up time") {
  const double lambda = 0.5, s = 1.2, zeta = 0.8;
  const double T = mg1_setup_busy_period(lambda, s, zeta);
  CHECK(T / (T + 1 / lambda + 1 / zeta) == doctest::Approx(lambda * s));
  CHECK_THROWS_AS(mg1_setup_busy_period(1.0, 1.0, 1.0), InstabilityError);
}
