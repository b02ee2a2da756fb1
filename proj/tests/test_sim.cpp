#include <doctest.h>

#include <cmath>

#include "teletraffic/delay.hpp"
#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"
#include "teletraffic/sim.hpp"

using namespace teletraffic;

namespace {

DesConfig fifo(std::size_t horizon) {
  DesConfig c;
  c.horizon = horizon;
  return c;
}

}  // namespace

TEST_CASE("ledger is self-consistent") {
  RngStream s(1);
  DesConfig c = fifo(2000);
  const DesResult r = des_single_server(exponential_source(0.8), exponential_source(1.0), c, s);
  REQUIRE(r.ledger.size() == 2000);
  double prev_arrival = 0.0, prev_end = 0.0;
  for (const auto& a : r.ledger) {
    CHECK(a.arrival_time >= prev_arrival);
    CHECK(a.service_start >= a.arrival_time);
    CHECK(a.service_start >= prev_end);  // FIFO, one server
    CHECK(a.service_end == doctest::Approx(a.service_start + a.service_duration));
    CHECK(a.delay == doctest::Approx(a.service_end - a.arrival_time));
    prev_arrival = a.arrival_time;
    prev_end = a.service_end;
  }
  CHECK(r.arrivals == 2000 - 200);
}

TEST_CASE("deterministic input reproduces D/D/1 with departures first on ties") {
  RngStream s(1);
  const DesResult r = des_single_server(deterministic_source(1.0), deterministic_source(1.0), fifo(100), s);
  for (const auto& a : r.ledger) CHECK(a.queue_size_on_arrival == 0);
  CHECK(r.mean_delay == doctest::Approx(1.0));
  CHECK(r.utilization == doctest::Approx(1.0));
  const DesResult h = des_single_server(deterministic_source(2.0), deterministic_source(1.0), fifo(100), s);
  CHECK(h.mean_queue_time == doctest::Approx(0.5));
  CHECK(h.time_fraction[1] == doctest::Approx(0.5));
}

TEST_CASE("M/M/1 simulation brackets the analysis") {
  const double lambda = 0.7, mu = 1.0;
  const QueueMetrics m = mm1_metrics(lambda, mu);
  const MultiReplicationSummary sum = run_replications_multi(
      10, RngStream(2024),
      [&](RngStream& s) {
        DesConfig c = fifo(100000);
        c.keep_ledger = false;
        c.inspector_rate = 0.5;
        const DesResult r = des_single_server(exponential_source(lambda), exponential_source(mu), c, s);
        return std::vector<double>{r.mean_delay, r.mean_queue_pasta, r.mean_queue_time, *r.mean_queue_inspector, r.utilization};
      },
      0.99, 4);
  CHECK(sum.ci[0].contains(m.mean_delay));
  CHECK(sum.ci[1].contains(m.mean_queue));
  CHECK(sum.ci[2].contains(m.mean_queue));
  CHECK(sum.ci[3].contains(m.mean_queue));
  CHECK(sum.ci[4].contains(0.7));
}

TEST_CASE("LIFO preemptive matches FIFO mean delay") {
  auto run = [](Discipline d) {
    return run_replications(
        10, RngStream(5),
        [d](RngStream& s) {
          DesConfig c = fifo(50000);
          c.discipline = d;
          c.keep_ledger = false;
          return des_single_server(exponential_source(0.6), exponential_source(1.0), c, s).mean_delay;
        },
        0.99);
  };
  const ReplicationSummary l = run(Discipline::lifo_preemptive);
  CHECK(l.ci.contains(1.0 / 0.4));
  CHECK(l.ci.overlaps(run(Discipline::fifo).ci));
}

TEST_CASE("non-preemptive priority class delays") {
  const std::vector<PriorityClass> cls{{0.3, ServiceSpec::exponential(1.0)}, {0.4, ServiceSpec::exponential(1.0)}};
  const auto expected = mg1_priority_nonpreemptive(cls);
  const MultiReplicationSummary sum = run_replications_multi(
      10, RngStream(8),
      [](RngStream& s) {
        DesConfig c = fifo(100000);
        c.discipline = Discipline::priority_nonpreemptive;
        c.keep_ledger = false;
        c.class_probs = {3.0 / 7.0, 4.0 / 7.0};
        c.class_services = {exponential_source(1.0), exponential_source(1.0)};
        const DesResult r = des_single_server(exponential_source(0.7), exponential_source(1.0), c, s);
        return r.class_mean_delay;
      },
      0.99, 4);
  CHECK(sum.ci[0].contains(*expected[0].mean_delay));
  CHECK(sum.ci[1].contains(*expected[1].mean_delay));
}

TEST_CASE("finite buffer blocking and the Wong bound") {
  const int N = 5;
  const double rho = 0.9;
  const double analytic = *mm1n_metrics(rho, 1.0, N).blocking;
  const MultiReplicationSummary sum = run_replications_multi(
      10, RngStream(11),
      [&](RngStream& s) {
        DesConfig c = fifo(100000);
        c.capacity = N;
        c.keep_ledger = false;
        const DesResult fin = des_single_server(exponential_source(rho), exponential_source(1.0), c, s);
        DesConfig inf = fifo(100000);
        inf.keep_ledger = false;
        RngStream s2 = s.substream(99);
        const DesResult unb = des_single_server(exponential_source(rho), exponential_source(1.0), inf, s2);
        double over = 0.0;
        for (std::size_t i = static_cast<std::size_t>(N) + 1; i < unb.time_fraction.size(); ++i) over += unb.time_fraction[i];
        return std::vector<double>{fin.blocking, over - rho * fin.blocking};
      },
      0.99, 4);
  CHECK(sum.ci[0].contains(analytic));
  CHECK(sum.ci[1].upper() >= 0.0);
}

TEST_CASE("multi-server loss system") {
  const MultiReplicationSummary sum = run_replications_multi(
      10, RngStream(12),
      [](RngStream& s) {
        DesConfig c;
        c.keep_ledger = false;
        return std::vector<double>{des_multi_server(5, 5, exponential_source(4.0), deterministic_source(1.0), 50000, s, c).blocking};
      },
      0.99, 4);
  CHECK(sum.ci[0].contains(erlang_b(4.0, 5)));
}

TEST_CASE("literal Monte Carlo routines") {
  const ReplicationSummary q = run_replications(10, RngStream(3), [](RngStream& s) { return mc_mm1(0.5, 1.0, 200000, s); }, 0.99);
  CHECK(q.ci.contains(1.0));
  const ReplicationSummary b =
      run_replications(10, RngStream(4), [](RngStream& s) { return mc_mmkk(20.0, 1.0, 30, 200000, s).blocking; }, 0.99);
  CHECK(b.ci.contains(erlang_b(20.0, 30)));
  RngStream s(1);
  CHECK(mc_mmkk(1.0, 1.0, 0, 10, s).blocking == 1.0);
  CHECK_THROWS_AS(mc_mmkk(1.0, 1.0, -1, 10, s), ParameterError);
}

TEST_CASE("single cell without handovers is M/M/k/k, draw for draw") {
  CellularSpec spec;
  spec.cells = 1;
  spec.channels = 8;
  spec.new_call_rate = {6.0};
  spec.mu = 1.0;
  spec.handover_rate = {0.0};
  spec.routing = {{0.0}};
  RngStream a(77), b(77);
  const CellularResult c = cellular_sim(spec, 100000, a);
  const McLossResult m = mc_mmkk(6.0, 1.0, 8, 100000, b);
  CHECK(c.blocking == m.blocking);
  CHECK(c.blocked[0] == m.blocked);
}

TEST_CASE("cellular network conserves calls and validates routing") {
  CellularSpec spec;
  spec.cells = 3;
  spec.channels = 5;
  spec.new_call_rate = {3.0, 2.0, 4.0};
  spec.mu = 1.0;
  spec.handover_rate = {0.5, 0.5, 0.5};
  spec.routing = {{0.0, 0.5, 0.5}, {1.0, 0.0, 0.0}, {0.5, 0.5, 0.0}};
  RngStream s(9);
  const CellularResult r = cellular_sim(spec, 50000, s);
  std::size_t arrivals = 0;
  for (std::size_t a : r.arrivals) arrivals += a;
  CHECK(arrivals == 50000);
  CHECK(r.blocking > 0.0);
  CHECK(r.blocking < 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.handovers_dropped[i] <= r.handovers[i]);
  spec.routing[0][0] = 0.5;
  spec.routing[0][1] = 0.0;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
}

TEST_CASE("loss network simulation on a single link is Erlang B") {
  const CircuitNetworkSpec spec{{{"L1", 6}}, {{{0}, 4.0}}};
  const ReplicationSummary r = run_replications(
      10, RngStream(21), [&](RngStream& s) { return loss_network_sim(spec, 100000, s).route_blocking[0]; }, 0.99);
  CHECK(r.ci.contains(erlang_b(4.0, 6)));
}

TEST_CASE("inspection paradox doubles the straddling interval") {
  RngStream s(31);
  const InspectorDemo d = poisson_inspector_paradox_demo(2.0, 20000.0, 20000, s);
  CHECK(d.interval_mean == doctest::Approx(0.5).epsilon(0.03));
  CHECK(d.straddling_mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("replications do not depend on the thread count") {
  auto run = [](RngStream& s) { return std::vector<double>{exp_deviate(s, 1.0), s.uniform01()}; };
  const auto one = run_replications_multi(16, RngStream(5), run, 0.95, 1);
  const auto many = run_replications_multi(16, RngStream(5), run, 0.95, 8);
  CHECK(one.observations == many.observations);
}

TEST_CASE("sources") {
  RngStream s(1);
  const Deviate t = trace_source({1.0, 2.0, 3.0});
  CHECK(t(s) == 1.0);
  CHECK(t(s) == 2.0);
  CHECK(t(s) == 3.0);
  CHECK(t(s) == 1.0);
  const Deviate p = pareto_source(2.5, 2.0);
  double sum = 0.0;
  for (int i = 0; i < 200000; ++i) sum += p(s);
  CHECK(sum / 200000 == doctest::Approx(2.0).epsilon(0.03));
  const Deviate u = uniform_source(1.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double v = u(s);
    CHECK(v >= 1.0);
    CHECK(v <= 3.0);
  }
  CHECK_THROWS_AS(pareto_source(1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(des_single_server(t, t, DesConfig{}, s), ParameterError);
}
