#include "teletraffic/multiservice.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>

#include "teletraffic/errors.hpp"

namespace teletraffic {

namespace {

void validate(const std::vector<ServiceClass>& classes, int k) {
  if (classes.empty()) throw ParameterError("need at least one service class");
  if (k < 0) throw ParameterError("capacity k must be non-negative");
  for (const auto& c : classes) {
    if (c.slots < 1) throw ParameterError("slots per call must be at least 1");
    if (!(c.erlangs() >= 0.0)) throw ParameterError("class load must be non-negative");
  }
}

// Neumaier summation.
struct CompensatedSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

FeasibleStateSet ms_enumerate_solve(const std::vector<ServiceClass>& classes, int k) {
  validate(classes, k);
  const std::size_t I = classes.size();
  // Count first so the size guard fires before any allocation.
  std::size_t count = 0;
  {
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (count > kMaxEnumeratedStates) return;
      if (i == I) {
        ++count;
        return;
      }
      for (int n = 0; n * classes[i].slots <= left; ++n) rec(i + 1, left - n * classes[i].slots);
    };
    rec(0, k);
  }
  if (count > kMaxEnumeratedStates) throw ParameterError("feasible state space exceeds 1e7 states; use the occupancy recursion");

  FeasibleStateSet out;
  out.states.reserve(count);
  std::vector<double> logw;
  logw.reserve(count);
  std::vector<double> logA(I);
  for (std::size_t i = 0; i < I; ++i) logA[i] = std::log(classes[i].erlangs());
  std::vector<int> j(I, 0);
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t i, int left, double lw) {
    if (i == I) {
      out.states.push_back(j);
      logw.push_back(lw);
      return;
    }
    for (int n = 0; n * classes[i].slots <= left; ++n) {
      j[i] = n;
      double term = 0.0;
      if (n > 0) term = classes[i].erlangs() > 0.0 ? n * logA[i] - std::lgamma(n + 1.0) : -std::numeric_limits<double>::infinity();
      rec(i + 1, left - n * classes[i].slots, lw + term);
    }
    j[i] = 0;
  };
  rec(0, k, 0.0);
  const double top = *std::max_element(logw.begin(), logw.end());
  CompensatedSum total;
  out.probabilities.resize(logw.size());
  for (std::size_t s = 0; s < logw.size(); ++s) total.add(out.probabilities[s] = std::exp(logw[s] - top));
  const double norm = total.value();
  for (double& p : out.probabilities) p /= norm;
  return out;
}

std::vector<double> ms_blocking(const std::vector<ServiceClass>& classes, int k) {
  const FeasibleStateSet f = ms_enumerate_solve(classes, k);
  std::vector<double> out;
  for (const auto& cls : classes) {
    CompensatedSum admitted;
    for (std::size_t s = 0; s < f.states.size(); ++s) {
      int used = 0;
      for (std::size_t i = 0; i < classes.size(); ++i) used += f.states[s][i] * classes[i].slots;
      if (used + cls.slots <= k) admitted.add(f.probabilities[s]);
    }
    out.push_back(std::max(0.0, 1.0 - admitted.value()));
  }
  return out;
}

std::vector<double> ms_occupancy_distribution(const std::vector<ServiceClass>& classes, int k) {
  validate(classes, k);
  std::vector<double> q(static_cast<std::size_t>(k) + 1, 0.0);
  q[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    double v = 0.0;
    for (const auto& c : classes)
      if (j - c.slots >= 0) v += c.erlangs() * c.slots * q[static_cast<std::size_t>(j - c.slots)];
    v /= j;
    q[static_cast<std::size_t>(j)] = v;
    if (v > 1e250)
      for (int i = 0; i <= j; ++i) q[static_cast<std::size_t>(i)] /= 1e250;
  }
  CompensatedSum total;
  for (double v : q) total.add(v);
  const double norm = total.value();
  for (double& v : q) v /= norm;
  return q;
}

std::vector<double> ms_occupancy_recursion(const std::vector<ServiceClass>& classes, int k) {
  const std::vector<double> q = ms_occupancy_distribution(classes, k);
  std::vector<double> out;
  for (const auto& c : classes) {
    CompensatedSum b;
    for (int j = std::max(0, k - c.slots + 1); j <= k; ++j) b.add(q[static_cast<std::size_t>(j)]);
    out.push_back(std::min(1.0, b.value()));
  }
  return out;
}

std::vector<CriticalProbeRow> ms_critical_scaling_probe(const std::vector<ServiceClass>& classes, const std::vector<int>& ks) {
  validate(classes, 0);
  double base = 0.0;
  for (const auto& c : classes) base += c.erlangs() * c.slots;
  if (!(base > 0.0)) throw ParameterError("critical probe needs positive total load");
  std::vector<CriticalProbeRow> rows;
  for (int k : ks) {
    if (k < 1) throw ParameterError("capacities must be positive");
    std::vector<ServiceClass> scaled = classes;
    for (auto& c : scaled) c.arrival_rate *= k / base;
    CriticalProbeRow row{k, ms_occupancy_recursion(scaled, k), {}};
    for (std::size_t i = 0; i < classes.size(); ++i) row.scaled.push_back(row.blocking[i] * std::sqrt(static_cast<double>(k)) / classes[i].slots);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace teletraffic
