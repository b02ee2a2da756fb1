#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "teletraffic/errors.hpp"
#include "teletraffic/stats.hpp"
#include "teletraffic/traffic.hpp"

using namespace teletraffic;

namespace {

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("Poisson counts have equal mean and variance") {
  RngStream s(1);
  const auto t = poisson_arrivals(3.0, 20000.0, s);
  CHECK(std::is_sorted(t.begin(), t.end()));
  CHECK(t.back() <= 20000.0);
  const auto c = window_counts(t, 1.0, 20000.0);
  CHECK(c.size() == 20000);
  CHECK(sample_mean(c) == doctest::Approx(3.0).epsilon(0.02));
  CHECK(sample_variance(c) == doctest::Approx(3.0).epsilon(0.05));
  std::vector<double> gaps(t.size());
  std::adjacent_difference(t.begin(), t.end(), gaps.begin());
  CHECK(ks_test(gaps, [](double x) { return 1.0 - std::exp(-3.0 * x); }).p_value > 0.001);
}

TEST_CASE("superposition and splitting") {
  RngStream s(2);
  const auto a = poisson_arrivals(1.0, 10000.0, s);
  const auto b = poisson_arrivals(2.0, 10000.0, s);
  const auto m = superpose(a, b);
  CHECK(m.size() == a.size() + b.size());
  CHECK(std::is_sorted(m.begin(), m.end()));
  const auto [x, y] = split(m, 0.25, s);
  CHECK(x.size() + y.size() == m.size());
  CHECK(static_cast<double>(x.size()) / 10000.0 == doctest::Approx(0.75).epsilon(0.05));
  CHECK(std::is_sorted(y.begin(), y.end()));
  CHECK_THROWS_AS(split(m, 1.5, s), ParameterError);
}

TEST_CASE("MMPP(2) long-run rate") {
  const Mmpp2Params p{4.0, 0.5, 0.2, 0.8, 1.0};
  CHECK(p.mode_prob(0) == doctest::Approx(0.8));
  CHECK(p.lambda_av() == doctest::Approx(0.8 * 4.0 + 0.2 * 0.5));
  RngStream s(3);
  const Mmpp2Trace t = mmpp2_arrivals(p, 50000.0, s);
  CHECK(static_cast<double>(t.times.size()) / 50000.0 == doctest::Approx(p.lambda_av()).epsilon(0.03));
  CHECK(t.modes.size() == t.times.size());
  CHECK(std::is_sorted(t.switch_times.begin(), t.switch_times.end()));
  const Deviate d = mmpp2_source(p);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += d(s);
  CHECK(100000.0 / sum == doctest::Approx(p.lambda_av()).epsilon(0.05));
  CHECK_THROWS_AS((Mmpp2Params{1.0, 1.0, 0.0, 1.0, 1.0}.validate()), ParameterError);
}

TEST_CASE("AR(1) fit reproduces the requested moments") {
  const Ar1Params p = ar1_fit(10.0, 4.0, 12.0);
  CHECK(p.a == doctest::Approx(0.75));
  CHECK(p.mean() == doctest::Approx(10.0));
  CHECK(p.variance() == doctest::Approx(4.0));
  RngStream s(4);
  const auto x = ar1_generate(p, 400000, s);
  CHECK(sample_mean(x) == doctest::Approx(10.0).epsilon(0.01));
  CHECK(sample_variance(x) == doctest::Approx(4.0).epsilon(0.03));
  CHECK(autocorrelation(x, 1) == doctest::Approx(0.75).epsilon(0.01));
  CHECK(autocorrelation(x, 2) == doctest::Approx(0.5625).epsilon(0.02));
  CHECK_THROWS_AS(ar1_fit(1.0, 0.0, 1.0), ParameterError);
}

TEST_CASE("EAR(1) keeps an exponential marginal") {
  RngStream s(5);
  const auto d = ear1_interarrivals(2.0, 0.6, 200000, s);
  CHECK(sample_mean(d) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(autocorrelation(d, 1) == doctest::Approx(0.6).epsilon(0.03));
  std::vector<double> thin;
  for (std::size_t i = 0; i < d.size(); i += 10) thin.push_back(d[i]);
  CHECK(ks_test(thin, [](double x) { return 1.0 - std::exp(-2.0 * x); }).p_value > 0.001);
  // a = 0 is plain Poisson.
  const auto p = ear1_interarrivals(2.0, 0.0, 50000, s);
  CHECK(std::abs(autocorrelation(p, 1)) < 0.02);
  CHECK_THROWS_AS(ear1_interarrivals(1.0, 1.0, 10, s), ParameterError);
}

TEST_CASE("PPBP mean workload and long-range dependence") {
  const PpbpParams p = PpbpParams::from_hurst(2.0, 1.0, 0.8);
  CHECK(p.gamma == doctest::Approx(1.4));
  CHECK(p.hurst() == doctest::Approx(0.8));
  CHECK(p.mean_duration() == doctest::Approx(1.0 / 0.4));
  RngStream s(6);
  const auto w = ppbp_workload(p, 200000, s);
  CHECK(w.size() == 200000);
  CHECK(sample_mean(w) == doctest::Approx(p.mean_workload()).epsilon(0.05));
  const double H = hurst_variance_time(w, {10, 20, 50, 100, 200, 500, 1000});
  CHECK(H > 0.65);
  CHECK(H < 0.95);
  CHECK_THROWS_AS(PpbpParams::from_hurst(1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("slotted queue follows the Lindley recursion") {
  const auto q = slotted_queue({3.0, 0.0, 1.0, 4.0, 0.0}, 2.0);
  CHECK(q == std::vector<double>{1.0, 0.0, 0.0, 2.0, 0.0});
}

TEST_CASE("trace files round-trip") {
  const std::string path = temp_path("tt_trace_roundtrip.txt");
  const std::vector<double> v{0.1, 1.0 / 3.0, 2.5e-300, 7.0};
  write_trace(path, v);
  CHECK(read_trace(path) == v);
  {
    std::ofstream out(path);
    out << "# comment\n1.5\n\n2 3\n";
  }
  CHECK_THROWS_WITH_AS(read_trace(path), doctest::Contains(":4:"), ParameterError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_trace(path), ParameterError);
}
