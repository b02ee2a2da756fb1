#include <doctest.h>

#include <cmath>

#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"
#include "teletraffic/network.hpp"

using namespace teletraffic;

TEST_CASE("tandem Jackson network is two independent M/M/1 queues") {
  const JacksonSpec spec{{1.0, 0.0}, {2.0, 3.0}, {{0.0, 1.0}, {0.0, 0.0}}};
  const JacksonResult r = jackson_solve(spec);
  CHECK(r.arrival_rates[1] == doctest::Approx(1.0));
  CHECK(r.queues[0].mean_queue == doctest::Approx(1.0));
  CHECK(r.queues[1].mean_queue == doctest::Approx(0.5));
  CHECK(r.mean_population == doctest::Approx(1.5));
  CHECK(r.network_mean_delay == doctest::Approx(1.5));
  CHECK(r.prob_all_empty == doctest::Approx(0.5 * (2.0 / 3.0)));
}

TEST_CASE("feedback inflates the visit rate") {
  // Fraction 0.25 returns: lambda = r / 0.75.
  const JacksonSpec spec{{0.6}, {2.0}, {{0.25}}};
  const JacksonResult r = jackson_solve(spec);
  CHECK(r.arrival_rates[0] == doctest::Approx(0.8));
  CHECK(r.utilization[0] == doctest::Approx(0.4));
  // Little over the whole network.
  CHECK(r.network_mean_delay == doctest::Approx(r.mean_population / 0.6));
}

TEST_CASE("traffic equations on a three-node network") {
  const JacksonSpec spec{{1.0, 0.5, 0.0}, {4.0, 3.0, 5.0}, {{0.0, 0.5, 0.3}, {0.2, 0.0, 0.4}, {0.1, 0.1, 0.0}}};
  const JacksonResult r = jackson_solve(spec);
  for (std::size_t j = 0; j < 3; ++j) {
    double in = spec.external_rates[j];
    for (std::size_t i = 0; i < 3; ++i) in += r.arrival_rates[i] * spec.routing[i][j];
    CHECK(r.arrival_rates[j] == doctest::Approx(in).epsilon(1e-12));
  }
  // Flow out of the network equals flow in.
  double out = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double stay = 0.0;
    for (double p : spec.routing[i]) stay += p;
    out += r.arrival_rates[i] * (1.0 - stay);
  }
  CHECK(out == doctest::Approx(1.5));
}

TEST_CASE("Jackson validation") {
  CHECK_THROWS_AS(jackson_solve({{1.0}, {0.5}, {{0.0}}}), InstabilityError);
  CHECK_THROWS_AS(jackson_solve({{1.0}, {2.0}, {{1.2}}}), ParameterError);
  CHECK_THROWS_AS(jackson_solve({{1.0, 0.0}, {2.0}, {{0.0}}}), ParameterError);
}

TEST_CASE("single-link network gives Erlang B") {
  const CircuitNetworkSpec spec{{{"L1", 10}}, {{{0}, 7.0}}};
  const EfpaResult r = efpa_solve(spec);
  CHECK(r.route_blocking[0] == doctest::Approx(erlang_b(7.0, 10)).epsilon(1e-10));
  CHECK(r.link_offered[0] == doctest::Approx(7.0));
}

TEST_CASE("reduced-load fixed point") {
  const CircuitNetworkSpec spec{{{"L1", 5}, {"L2", 6}}, {{{0, 1}, 3.0}, {{0}, 2.0}, {{1}, 2.5}}};
  const EfpaResult r = efpa_solve(spec, {1e-13, 10000, 1.0});
  const double B1 = r.link_blocking[0], B2 = r.link_blocking[1];
  // Fixed-point equations hold at the solution.
  CHECK(B1 == doctest::Approx(erlang_b(3.0 * (1 - B2) + 2.0, 5)).epsilon(1e-10));
  CHECK(B2 == doctest::Approx(erlang_b(3.0 * (1 - B1) + 2.5, 6)).epsilon(1e-10));
  CHECK(r.route_blocking[0] == doctest::Approx(1 - (1 - B1) * (1 - B2)).epsilon(1e-12));
  CHECK(r.route_blocking[1] == doctest::Approx(B1).epsilon(1e-12));
  CHECK(r.residual < 1e-12);
  // Damping changes the path, not the answer.
  const EfpaResult d = efpa_solve(spec, {1e-13, 10000, 0.5});
  CHECK(d.link_blocking[0] == doctest::Approx(B1).epsilon(1e-10));
}

TEST_CASE("fixed point reports non-convergence") {
  const CircuitNetworkSpec spec{{{"L1", 5}, {"L2", 6}}, {{{0, 1}, 3.0}}};
  CHECK_THROWS_AS(efpa_solve(spec, {1e-15, 1, 1.0}), ConvergenceError);
}

TEST_CASE("circuit network validation") {
  CHECK_THROWS_AS(efpa_solve({{{"L1", 5}}, {{{1}, 1.0}}}), ParameterError);
  CHECK_THROWS_AS(efpa_solve({{{"L1", 5}}, {{{0}, -1.0}}}), ParameterError);
  CHECK_THROWS_AS(efpa_solve({{{"L1", 5}}, {{{}, 1.0}}}), ParameterError);
}

TEST_CASE("optical parameter conversion") {
  // 40 Gb/s of bursts of 1 Gb on 10 Gb/s wavelengths at 80% utilisation.
  const OpticalParams p = convert_params(40.0, 1.0, 10.0, 0.8);
  CHECK(p.lambda == doctest::Approx(40.0));
  CHECK(p.holding == doctest::Approx(1.0 / 8.0));
  CHECK(p.offered == doctest::Approx(5.0));
  CHECK(p.offered == doctest::Approx(p.lambda * p.holding));
  CHECK_THROWS_AS(convert_params(1.0, 1.0, 1.0, 0.0), ParameterError);
}
