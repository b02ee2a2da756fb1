#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "oracles.hpp"
#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"
#include "teletraffic/multiservice.hpp"

using namespace teletraffic;

namespace {

// Builds the full multi-class CTMC over feasible (n_1..n_I) call counts and
// returns per-class blocking from a dense solve.
std::vector<double> ctmc_blocking(const std::vector<ServiceClass>& cls, int k) {
  std::vector<std::vector<int>> states;
  std::map<std::vector<int>, Eigen::Index> index;
  std::vector<int> n(cls.size(), 0);
  auto used = [&](const std::vector<int>& v) {
    int s = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) s += v[i] * cls[i].slots;
    return s;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cls.size()) {
      index[n] = static_cast<Eigen::Index>(states.size());
      states.push_back(n);
      return;
    }
    for (n[i] = 0; used(n) <= k; ++n[i]) rec(i + 1);
    n[i] = 0;
  };
  rec(0);
  const Eigen::Index S = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(S, S);
  for (Eigen::Index s = 0; s < S; ++s) {
    auto v = states[static_cast<std::size_t>(s)];
    for (std::size_t i = 0; i < cls.size(); ++i) {
      auto up = v;
      ++up[i];
      if (used(up) <= k) Q(s, index[up]) += cls[i].arrival_rate;
      if (v[i] > 0) {
        auto down = v;
        --down[i];
        Q(s, index[down]) += v[i] / cls[i].mean_holding_time;
      }
    }
    Q(s, s) = -Q.row(s).sum();
  }
  const auto pi = oracle::stationary(Q);
  std::vector<double> B(cls.size(), 0.0);
  for (Eigen::Index s = 0; s < S; ++s)
    for (std::size_t i = 0; i < cls.size(); ++i)
      if (used(states[static_cast<std::size_t>(s)]) + cls[i].slots > k) B[i] += pi[static_cast<std::size_t>(s)];
  return B;
}

const std::vector<ServiceClass> voice_video{{1, 0.3, 3.0}, {2, 0.2, 5.0}};

}  // namespace

TEST_CASE("two-channel voice and video example") {
  const auto B = ms_blocking(voice_video, 2);
  CHECK(B[0] == doctest::Approx(281.0 / 661.0).epsilon(1e-12));
  CHECK(B[1] == doctest::Approx(461.0 / 661.0).epsilon(1e-12));
}

TEST_CASE("three-channel voice and video example") {
  // Unnormalised weights 1, 0.9, 0.405, 0.1215 (voice only) and 1, 0.9
  // (one video call plus 0 or 1 voice).
  const auto B = ms_blocking(voice_video, 3);
  CHECK(B[0] == doctest::Approx(2043.0 / 8653.0).epsilon(1e-12));
  CHECK(B[1] == doctest::Approx(4853.0 / 8653.0).epsilon(1e-12));
  const FeasibleStateSet f = ms_enumerate_solve(voice_video, 3);
  CHECK(f.states.size() == 6);
  CHECK(std::accumulate(f.probabilities.begin(), f.probabilities.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("enumeration, recursion and the full chain agree") {
  const std::vector<std::vector<ServiceClass>> cases{
      {{1, 2.0, 1.0}, {3, 0.5, 2.0}},
      {{1, 4.0, 0.5}, {2, 1.0, 1.0}, {5, 0.3, 1.5}},
      {{2, 1.0, 1.0}, {4, 0.4, 1.0}},
  };
  for (const auto& cls : cases)
    for (int k : {1, 4, 9, 14}) {
      const auto ref = ctmc_blocking(cls, k);
      const auto en = ms_blocking(cls, k);
      const auto rc = ms_occupancy_recursion(cls, k);
      for (std::size_t i = 0; i < cls.size(); ++i) {
        CHECK(en[i] == doctest::Approx(ref[i]).epsilon(1e-10));
        CHECK(std::abs(rc[i] - en[i]) < 1e-10);
      }
    }
}

TEST_CASE("occupancy distribution is the aggregated state distribution") {
  const std::vector<ServiceClass> cls{{1, 2.0, 1.0}, {3, 0.5, 2.0}};
  const int k = 7;
  const FeasibleStateSet f = ms_enumerate_solve(cls, k);
  std::vector<double> agg(k + 1, 0.0);
  for (std::size_t s = 0; s < f.states.size(); ++s) {
    int j = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) j += f.states[s][i] * cls[i].slots;
    agg[static_cast<std::size_t>(j)] += f.probabilities[s];
  }
  const auto q = ms_occupancy_distribution(cls, k);
  for (int j = 0; j <= k; ++j) CHECK(q[static_cast<std::size_t>(j)] == doctest::Approx(agg[static_cast<std::size_t>(j)]).epsilon(1e-12));
}

TEST_CASE("single-slot classes reduce to Erlang B") {
  const std::vector<ServiceClass> cls{{1, 3.0, 1.0}, {1, 2.0, 2.0}};
  for (double b : ms_blocking(cls, 9)) CHECK(b == doctest::Approx(erlang_b(7.0, 9)).epsilon(1e-12));
}

TEST_CASE("wider calls block more") {
  const std::vector<ServiceClass> cls{{1, 3.0, 1.0}, {2, 1.0, 1.0}, {4, 0.5, 1.0}};
  const auto B = ms_blocking(cls, 12);
  CHECK(B[0] < B[1]);
  CHECK(B[1] < B[2]);
}

TEST_CASE("critical scaling probe loads every capacity at k") {
  const std::vector<ServiceClass> cls{{1, 1.0, 1.0}, {2, 1.0, 1.0}};
  const auto rows = ms_critical_scaling_probe(cls, {10, 100, 1000});
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    double load = 0.0;
    for (const auto& c : cls) load += c.erlangs() * (r.k / 3.0) * c.slots;
    CHECK(load == doctest::Approx(r.k));
    CHECK(r.scaled[0] == doctest::Approx(r.blocking[0] * std::sqrt(r.k)));
  }
  CHECK(rows[2].blocking[1] < rows[0].blocking[1]);
  // Blocking falls roughly like 1/sqrt(k).
  CHECK(rows[2].scaled[1] == doctest::Approx(rows[1].scaled[1]).epsilon(0.1));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(ms_blocking({{0, 1.0, 1.0}}, 3), ParameterError);
  CHECK_THROWS_AS(ms_blocking({{1, -1.0, 1.0}}, 3), ParameterError);
  CHECK_THROWS_AS(ms_blocking({{1, 1.0, 1.0}}, -1), ParameterError);
}
