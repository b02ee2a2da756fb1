#include "teletraffic/detsim.hpp"

#include <algorithm>
#include <boost/integer/common_factor_rt.hpp>
#include <limits>
#include <map>
#include <vector>

#include "teletraffic/errors.hpp"

namespace teletraffic {

namespace {

using Ticks = long long;

// State seen by an arrival, after departures at the same instant.
struct State {
  std::vector<Ticks> remaining;  // per server, sorted; 0 means idle
  Ticks waiting = 0;

  bool operator==(const State& o) const { return waiting == o.waiting && remaining == o.remaining; }
};

struct StepStats {
  std::map<long, Ticks> time_in;  // integer time spent with n in the system
  Ticks busy = 0;                 // server-ticks
  Ticks blocked = 0;
};

class Stepper {
 public:
  Stepper(Ticks ta, Ticks ts, int k, std::optional<int> cap) : ta_(ta), ts_(ts), k_(k), cap_(cap) {}

  State initial() const { return State{std::vector<Ticks>(static_cast<std::size_t>(k_), 0), 0}; }

  // Admit the arrival at the current instant, then advance to the next
  // arrival instant.
  State step(State s, StepStats* st) const {
    long busy = std::count_if(s.remaining.begin(), s.remaining.end(), [](Ticks r) { return r > 0; });
    const long in_system = busy + static_cast<long>(s.waiting);
    if (cap_ && in_system >= *cap_) {
      if (st) ++st->blocked;
    } else {
      auto idle = std::find(s.remaining.begin(), s.remaining.end(), Ticks{0});
      if (idle != s.remaining.end()) {
        *idle = ts_;
        ++busy;
      } else {
        ++s.waiting;
      }
    }
    Ticks t = 0;
    while (true) {
      Ticks m = std::numeric_limits<Ticks>::max();
      for (Ticks r : s.remaining)
        if (r > 0) m = std::min(m, r);
      const Ticks dt = std::min(m, ta_ - t);
      if (st && dt > 0) {
        st->time_in[busy + static_cast<long>(s.waiting)] += dt;
        st->busy += busy * dt;
      }
      for (Ticks& r : s.remaining)
        if (r > 0) r -= dt;
      t += dt;
      if (m > dt) break;  // no completion inside the window
      // Completions at this instant: refill from the queue in FIFO order.
      const long done = static_cast<long>(std::count(s.remaining.begin(), s.remaining.end(), Ticks{0})) -
                        (static_cast<long>(s.remaining.size()) - busy);
      busy -= done;
      for (long d = 0; d < done && s.waiting > 0; ++d) {
        *std::find(s.remaining.begin(), s.remaining.end(), Ticks{0}) = ts_;
        --s.waiting;
        ++busy;
      }
      if (t == ta_) break;
    }
    std::sort(s.remaining.begin(), s.remaining.end());
    return s;
  }

 private:
  Ticks ta_, ts_;
  int k_;
  std::optional<int> cap_;
};

Ticks to_ticks(const Rational& x, Ticks scale) {
  const Rational v = x * scale;
  if (v.denominator() != 1) throw ParameterError("time does not scale to an integer");
  return v.numerator();
}

}  // namespace

DetSimReport det_simulate(const DetSimConfig& cfg) {
  if (cfg.interarrival <= Rational(0) || cfg.service <= Rational(0)) throw ParameterError("inter-arrival and service times must be positive");
  if (cfg.servers < 1) throw ParameterError("need at least one server");
  if (cfg.capacity && *cfg.capacity < cfg.servers) throw ParameterError("capacity must be at least the number of servers");
  if (cfg.max_arrivals < 2) throw ParameterError("arrival budget too small");

  const Ticks scale = boost::integer::lcm(cfg.interarrival.denominator(), cfg.service.denominator());
  const Ticks ta = to_ticks(cfg.interarrival, scale), ts = to_ticks(cfg.service, scale);
  if (static_cast<double>(std::max(ta, ts)) * static_cast<double>(cfg.max_arrivals) * (cfg.servers + 1) > 9e18)
    throw ParameterError("time scale too fine for exact integer simulation");
  const Stepper f(ta, ts, cfg.servers, cfg.capacity);
  const State x0 = f.initial();

  // Brent's cycle detection on the arrival-instant state.
  std::size_t calls = 0;
  std::size_t power = 1, lam = 1;
  State tortoise = x0, hare = f.step(x0, nullptr);
  ++calls;
  bool found = true;
  while (!(tortoise == hare)) {
    if (calls >= cfg.max_arrivals) {
      found = false;
      break;
    }
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = f.step(hare, nullptr);
    ++calls;
    ++lam;
  }

  DetSimReport rep;
  DeterministicResult& res = rep.result;
  if (!found) {
    // No repetition: look for unbounded growth over the second half.
    const std::size_t M = std::min<std::size_t>(cfg.max_arrivals, 200000);
    State s = x0;
    StepStats second;
    Ticks mid_waiting = 0;
    for (std::size_t j = 0; j < M; ++j) {
      if (j == M / 2) mid_waiting = s.waiting;
      s = f.step(std::move(s), j >= M / 2 ? &second : nullptr);
    }
    if (!(s.waiting > mid_waiting)) throw ConvergenceError("deterministic simulation found no cycle within budget", 0.0, static_cast<long>(calls));
    res.infinite_queue = true;
    res.utilization = Rational(second.busy, static_cast<Ticks>(cfg.servers) * ta * static_cast<Ticks>(M - M / 2));
    rep.transient_arrivals = M;
    return rep;
  }

  State a = x0, b = x0;
  for (std::size_t i = 0; i < lam; ++i) b = f.step(b, nullptr);
  std::size_t mu = 0;
  while (!(a == b)) {
    a = f.step(a, nullptr);
    b = f.step(b, nullptr);
    ++mu;
  }

  StepStats cycle;
  State s = a;
  for (std::size_t i = 0; i < lam; ++i) s = f.step(s, &cycle);
  if (!(s == a)) throw ConvergenceError("cycle replay diverged", 0.0, static_cast<long>(lam));

  // Replay more cycles; each must reproduce the state and the statistics.
  const std::size_t budget_cycles = (cfg.max_arrivals - std::min(cfg.max_arrivals, mu + lam)) / lam;
  const std::size_t extra = std::min(cfg.verify_cycles, budget_cycles);
  for (std::size_t c = 0; c < extra; ++c) {
    StepStats again;
    for (std::size_t i = 0; i < lam; ++i) s = f.step(s, &again);
    if (!(s == a) || again.busy != cycle.busy || again.blocked != cycle.blocked || again.time_in != cycle.time_in)
      throw ConvergenceError("cycle replay diverged", 0.0, static_cast<long>(c));
  }
  rep.cycles_verified = extra + 1;
  rep.transient_arrivals = mu;
  rep.cycle_arrivals = lam;

  const Ticks span = ta * static_cast<Ticks>(lam);
  Ticks area = 0;
  for (const auto& [n, t] : cycle.time_in) {
    if (t == 0) continue;
    res.state_fractions[n] = Rational(t, span);
    area += n * t;
  }
  res.mean_queue = Rational(area, span);
  res.utilization = Rational(cycle.busy, span * cfg.servers);
  res.blocking = Rational(cycle.blocked, static_cast<Ticks>(lam));
  res.cycle_length = Rational(span, scale);
  return rep;
}

DeterministicResult det_simulate_rates(const Rational& lambda, const Rational& mu, int servers, std::optional<int> capacity) {
  if (lambda <= Rational(0) || mu <= Rational(0)) throw ParameterError("deterministic rates must be positive");
  DetSimConfig cfg;
  cfg.interarrival = 1 / lambda;
  cfg.service = 1 / mu;
  cfg.servers = servers;
  cfg.capacity = capacity;
  return det_simulate(cfg).result;
}

}  // namespace teletraffic
