#include "teletraffic/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <memory>
#include <numeric>

#include "teletraffic/errors.hpp"

namespace teletraffic {

Deviate exponential_source(double rate) {
  if (!(rate > 0.0)) throw ParameterError("exponential rate must be positive");
  return [rate](RngStream& s) { return exp_deviate(s, rate); };
}

Deviate deterministic_source(double value) {
  if (!(value >= 0.0)) throw ParameterError("deterministic value must be nonnegative");
  return [value](RngStream&) { return value; };
}

Deviate uniform_source(double a, double b) {
  if (!(a >= 0.0 && b > a)) throw ParameterError("uniform source needs 0 <= a < b");
  return [a, b](RngStream& s) { return a + (b - a) * uniform01(s); };
}

Deviate pareto_source(double gamma, double mean) {
  if (!(gamma > 1.0)) throw ParameterError("Pareto shape must exceed 1 for a finite mean");
  if (!(mean > 0.0)) throw ParameterError("Pareto mean must be positive");
  const double delta = mean * (gamma - 1.0) / gamma;
  return [gamma, delta](RngStream& s) { return pareto_deviate(s, gamma, delta); };
}

Deviate trace_source(std::vector<double> values) {
  if (values.empty()) throw ParameterError("empty trace");
  for (double v : values)
    if (!(v >= 0.0)) throw ParameterError("trace values must be nonnegative");
  auto data = std::make_shared<std::vector<double>>(std::move(values));
  auto pos = std::make_shared<std::size_t>(0);
  return [data, pos](RngStream&) {
    const double v = (*data)[*pos];
    *pos = (*pos + 1) % data->size();
    return v;
  };
}

namespace {

struct Server {
  bool busy = false;
  std::size_t cust = 0;
  double completion = 0.0;
};

struct Waiting {
  std::size_t cust;
  double remaining;
};

}  // namespace

DesResult des_single_server(const Deviate& interarrival, const Deviate& service, const DesConfig& cfg, RngStream& stream) {
  if (cfg.horizon == 0) throw ParameterError("horizon of zero arrivals gives an empty result");
  if (cfg.servers < 1) throw ParameterError("need at least one server");
  if (cfg.capacity && *cfg.capacity < cfg.servers) throw ParameterError("capacity must be at least the number of servers");
  if (cfg.discipline == Discipline::lifo_preemptive && cfg.servers != 1)
    throw ParameterError("preemptive LIFO is single-server only");
  if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0)) throw ParameterError("warm-up fraction must be in [0,1)");
  if (cfg.inspector_rate < 0.0) throw ParameterError("inspector rate must be nonnegative");
  const std::size_t n_classes = cfg.class_probs.empty() ? 1 : cfg.class_probs.size();
  if (!cfg.class_probs.empty()) {
    if (cfg.class_services.size() != n_classes) throw ParameterError("one service source per class is required");
    double s = 0.0;
    for (double p : cfg.class_probs) {
      if (!(p >= 0.0)) throw ParameterError("class probabilities must be nonnegative");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw ParameterError("class probabilities must sum to 1");
  }

  RngStream arr_s = stream.substream(0), svc_s = stream.substream(1), cls_s = stream.substream(2), insp_s = stream.substream(3);

  const std::size_t warm = std::min(cfg.horizon - 1, static_cast<std::size_t>(std::floor(cfg.warmup_fraction * static_cast<double>(cfg.horizon))));
  DesResult r;
  std::vector<ArrivalRecord>& led = r.ledger;
  led.reserve(cfg.horizon);
  std::vector<Server> servers(static_cast<std::size_t>(cfg.servers));
  std::deque<Waiting> fifo;
  std::vector<Waiting> stack;
  std::vector<std::deque<Waiting>> prio(n_classes);
  std::vector<double> started(cfg.horizon, -1.0);

  const double inf = std::numeric_limits<double>::infinity();
  double now = 0.0;
  double next_arrival = interarrival(arr_s);
  double next_inspect = cfg.inspector_rate > 0.0 ? exp_deviate(insp_s, cfg.inspector_rate) : inf;
  std::size_t generated = 0;
  int in_system = 0;
  bool window_open = false, window_closed = false;
  std::vector<double> state_time;
  double busy_time = 0.0;
  double busy_start = 0.0;
  double insp_sum = 0.0;
  std::size_t insp_n = 0;

  auto accumulate = [&](double t) {
    if (window_open && !window_closed && t > now) {
      const auto s = static_cast<std::size_t>(in_system);
      if (state_time.size() <= s) state_time.resize(s + 1, 0.0);
      state_time[s] += t - now;
      int busy = 0;
      for (const auto& sv : servers) busy += sv.busy ? 1 : 0;
      busy_time += busy * (t - now);
    }
    now = t;
  };

  auto start_service = [&](Server& sv, const Waiting& w) {
    sv.busy = true;
    sv.cust = w.cust;
    sv.completion = now + w.remaining;
    if (started[w.cust] < 0.0) started[w.cust] = now;
  };

  auto pop_waiting = [&](Waiting& out) -> bool {
    switch (cfg.discipline) {
      case Discipline::fifo:
        if (fifo.empty()) return false;
        out = fifo.front();
        fifo.pop_front();
        return true;
      case Discipline::lifo_preemptive:
        if (stack.empty()) return false;
        out = stack.back();
        stack.pop_back();
        return true;
      case Discipline::priority_nonpreemptive:
        for (auto& q : prio) {
          if (!q.empty()) {
            out = q.front();
            q.pop_front();
            return true;
          }
        }
        return false;
    }
    return false;
  };

  while (true) {
    std::size_t dep_server = servers.size();
    double next_dep = inf;
    for (std::size_t i = 0; i < servers.size(); ++i) {
      if (servers[i].busy && servers[i].completion < next_dep) {
        next_dep = servers[i].completion;
        dep_server = i;
      }
    }
    const double t_arr = generated < cfg.horizon ? next_arrival : inf;
    const double t_insp = generated < cfg.horizon ? next_inspect : inf;
    if (next_dep == inf && t_arr == inf) break;

    if (t_insp < next_dep && t_insp < t_arr) {
      accumulate(t_insp);
      if (window_open) {
        insp_sum += in_system;
        ++insp_n;
      }
      next_inspect = now + exp_deviate(insp_s, cfg.inspector_rate);
      continue;
    }

    if (next_dep <= t_arr) {
      accumulate(next_dep);
      Server& sv = servers[dep_server];
      ArrivalRecord& rec = led[sv.cust];
      rec.service_start = started[sv.cust];
      rec.service_end = now;
      rec.delay = now - rec.arrival_time;
      sv.busy = false;
      --in_system;
      if (window_open && !window_closed) r.departure_times.push_back(now);
      Waiting w{};
      if (pop_waiting(w)) start_service(sv, w);
      if (in_system == 0 && window_open && busy_start >= r.window_start) r.busy_periods.push_back(now - busy_start);
      continue;
    }

    accumulate(t_arr);
    const std::size_t idx = generated++;
    if (idx == warm) {
      window_open = true;
      r.window_start = now;
    }
    ArrivalRecord rec;
    rec.arrival_time = now;
    rec.queue_size_on_arrival = in_system;
    if (n_classes > 1 || !cfg.class_probs.empty()) {
      const double u = uniform01(cls_s);
      double c = 0.0;
      rec.cls = static_cast<int>(n_classes) - 1;
      for (std::size_t j = 0; j < n_classes; ++j) {
        c += cfg.class_probs[j];
        if (u <= c) {
          rec.cls = static_cast<int>(j);
          break;
        }
      }
      rec.service_duration = cfg.class_services[static_cast<std::size_t>(rec.cls)](svc_s);
    } else {
      rec.service_duration = service(svc_s);
    }
    if (!(rec.service_duration >= 0.0)) throw ParameterError("service source produced a negative duration");
    led.push_back(rec);

    if (cfg.capacity && in_system >= *cfg.capacity) {
      led[idx].blocked = true;
      led[idx].service_start = now;
      led[idx].service_end = now;
    } else {
      if (in_system == 0) busy_start = now;
      ++in_system;
      const Waiting w{idx, rec.service_duration};
      auto free_it = std::find_if(servers.begin(), servers.end(), [](const Server& s) { return !s.busy; });
      if (free_it != servers.end()) {
        start_service(*free_it, w);
      } else if (cfg.discipline == Discipline::lifo_preemptive) {
        Server& sv = servers[0];
        stack.push_back({sv.cust, sv.completion - now});
        start_service(sv, w);
      } else if (cfg.discipline == Discipline::priority_nonpreemptive) {
        prio[static_cast<std::size_t>(rec.cls)].push_back(w);
      } else {
        fifo.push_back(w);
      }
    }

    if (generated == cfg.horizon) {
      window_closed = true;
      r.window_end = now;
    } else {
      const double gap = interarrival(arr_s);
      if (!(gap >= 0.0)) throw ParameterError("inter-arrival source produced a negative gap");
      next_arrival = now + gap;
    }
  }

  // Statistics over post-warm-up arrivals.
  std::vector<double> cls_delay(n_classes, 0.0), cls_wait(n_classes, 0.0);
  std::vector<std::size_t> cls_n(n_classes, 0);
  double delay_sum = 0.0, wait_sum = 0.0, q_sum = 0.0;
  std::size_t served = 0;
  for (std::size_t i = warm; i < led.size(); ++i) {
    const ArrivalRecord& a = led[i];
    ++r.arrivals;
    q_sum += a.queue_size_on_arrival;
    if (a.blocked) {
      ++r.blocked;
      continue;
    }
    ++served;
    delay_sum += a.delay;
    wait_sum += a.service_start - a.arrival_time;
    const auto c = static_cast<std::size_t>(a.cls);
    cls_delay[c] += a.delay;
    cls_wait[c] += a.service_start - a.arrival_time;
    ++cls_n[c];
  }
  r.blocking = static_cast<double>(r.blocked) / static_cast<double>(r.arrivals);
  r.mean_queue_pasta = q_sum / static_cast<double>(r.arrivals);
  if (served > 0) {
    r.mean_delay = delay_sum / static_cast<double>(served);
    r.mean_wait = wait_sum / static_cast<double>(served);
  }
  r.class_mean_delay.assign(n_classes, 0.0);
  r.class_mean_wait.assign(n_classes, 0.0);
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (cls_n[c] == 0) continue;
    r.class_mean_delay[c] = cls_delay[c] / static_cast<double>(cls_n[c]);
    r.class_mean_wait[c] = cls_wait[c] / static_cast<double>(cls_n[c]);
  }
  const double span = r.window_end - r.window_start;
  if (span > 0.0) {
    r.time_fraction = state_time;
    for (double& f : r.time_fraction) f /= span;
    for (std::size_t i = 0; i < r.time_fraction.size(); ++i) r.mean_queue_time += static_cast<double>(i) * r.time_fraction[i];
    r.utilization = busy_time / (span * cfg.servers);
  }
  if (insp_n > 0) r.mean_queue_inspector = insp_sum / static_cast<double>(insp_n);
  if (!cfg.keep_ledger) {
    r.ledger.clear();
    r.ledger.shrink_to_fit();
  }
  return r;
}

DesResult des_multi_server(int k, std::optional<int> capacity, const Deviate& interarrival, const Deviate& service,
                           std::size_t horizon, RngStream& stream, DesConfig cfg) {
  cfg.servers = k;
  cfg.capacity = capacity;
  cfg.horizon = horizon;
  return des_single_server(interarrival, service, cfg, stream);
}

double mc_mm1(double lambda, double mu, std::size_t max_measurements, RngStream& stream) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ParameterError("rates must be positive");
  if (!(lambda < mu)) throw InstabilityError("M/M/1 simulation needs lambda < mu");
  long Q = 0;
  double EQ = 0.0;
  std::size_t N = 0;
  while (N < max_measurements) {
    const double I = Q > 0 ? 1.0 : 0.0;
    if (uniform01(stream) <= lambda / (lambda + I * mu)) {
      ++N;
      EQ = ((static_cast<double>(N) - 1.0) * EQ + static_cast<double>(Q)) / static_cast<double>(N);
      ++Q;
    } else {
      --Q;
    }
  }
  return EQ;
}

McLossResult mc_mmkk(double lambda, double mu, int k, std::size_t max_arrivals, RngStream& stream) {
  if (!(lambda >= 0.0) || !(mu > 0.0)) throw ParameterError("need lambda >= 0 and mu > 0");
  if (k < 0) throw ParameterError("k must be nonnegative");
  McLossResult r;
  if (max_arrivals == 0 || lambda == 0.0) return r;
  long Q = 0;
  while (r.arrivals < max_arrivals) {
    if (uniform01(stream) <= lambda / (lambda + static_cast<double>(Q) * mu)) {
      ++r.arrivals;
      if (Q == k)
        ++r.blocked;
      else
        ++Q;
    } else {
      --Q;
    }
  }
  r.blocking = static_cast<double>(r.blocked) / static_cast<double>(r.arrivals);
  return r;
}

void CellularSpec::validate() const {
  if (cells < 1) throw ParameterError("need at least one cell");
  if (channels < 0) throw ParameterError("channels must be nonnegative");
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  const auto n = static_cast<std::size_t>(cells);
  if (new_call_rate.size() != n || handover_rate.size() != n) throw ParameterError("per-cell rate vectors must have one entry per cell");
  if (routing.size() != n) throw ParameterError("routing matrix must have one row per cell");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(new_call_rate[i] >= 0.0)) throw ParameterError("new-call rates must be nonnegative");
    if (!(handover_rate[i] >= 0.0)) throw ParameterError("handover rates must be nonnegative");
    if (routing[i].size() != n) throw ParameterError("routing matrix must be square");
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(routing[i][j] >= 0.0)) throw ParameterError("routing probabilities must be nonnegative");
      if (i == j && routing[i][j] > 0.0) throw ParameterError("a cell cannot hand over to itself");
      row += routing[i][j];
    }
    if (handover_rate[i] > 0.0 && !(row > 0.0))
      throw ParameterError("cell " + std::to_string(i) + " has a handover rate but no neighbors");
  }
}

namespace {

// Index of the first cumulative weight reaching u * total. Forced choices
// (a single positive weight) consume no deviate.
std::size_t pick(const std::vector<double>& w, double total, RngStream& s) {
  std::size_t positive = 0, last = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) {
      ++positive;
      last = i;
    }
  if (positive <= 1) return last;
  const double u = uniform01(s);
  double c = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    c += w[i];
    if (u <= c / total) return i;
  }
  return last;
}

}  // namespace

CellularResult cellular_sim(const CellularSpec& spec, std::size_t max_arrivals, RngStream& stream) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.cells);
  CellularResult r;
  r.arrivals.assign(n, 0);
  r.blocked.assign(n, 0);
  r.handovers.assign(n, 0);
  r.handovers_dropped.assign(n, 0);
  r.cell_blocking.assign(n, 0.0);
  const double lam_total = std::accumulate(spec.new_call_rate.begin(), spec.new_call_rate.end(), 0.0);
  if (max_arrivals == 0 || lam_total == 0.0) return r;

  std::vector<long> Q(n, 0);
  std::vector<double> w(n);
  std::size_t total_arrivals = 0;
  while (true) {
    double dep_total = 0.0, ho_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dep_total += static_cast<double>(Q[i]) * spec.mu;
      ho_total += static_cast<double>(Q[i]) * spec.handover_rate[i];
    }
    const double all = lam_total + dep_total + ho_total;
    const double u = uniform01(stream);
    if (u <= lam_total / all) {
      const std::size_t i = pick(spec.new_call_rate, lam_total, stream);
      if (total_arrivals == max_arrivals) break;
      ++total_arrivals;
      ++r.arrivals[i];
      if (Q[i] < spec.channels)
        ++Q[i];
      else
        ++r.blocked[i];
    } else if (u <= (lam_total + dep_total) / all) {
      for (std::size_t j = 0; j < n; ++j) w[j] = static_cast<double>(Q[j]) * spec.mu;
      --Q[pick(w, dep_total, stream)];
    } else {
      for (std::size_t j = 0; j < n; ++j) w[j] = static_cast<double>(Q[j]) * spec.handover_rate[j];
      const std::size_t i = pick(w, ho_total, stream);
      --Q[i];
      ++r.handovers[i];
      const double row = std::accumulate(spec.routing[i].begin(), spec.routing[i].end(), 0.0);
      const std::size_t j = pick(spec.routing[i], row, stream);
      if (Q[j] < spec.channels)
        ++Q[j];
      else
        ++r.handovers_dropped[j];
    }
  }
  std::size_t blocked = 0;
  for (std::size_t i = 0; i < n; ++i) {
    blocked += r.blocked[i];
    if (r.arrivals[i] > 0) r.cell_blocking[i] = static_cast<double>(r.blocked[i]) / static_cast<double>(r.arrivals[i]);
  }
  r.blocking = static_cast<double>(blocked) / static_cast<double>(max_arrivals);
  return r;
}

LossNetworkSimResult loss_network_sim(const CircuitNetworkSpec& spec, std::size_t max_arrivals, RngStream& stream) {
  spec.validate();
  const std::size_t R = spec.routes.size();
  LossNetworkSimResult r;
  r.route_arrivals.assign(R, 0);
  r.route_blocked.assign(R, 0);
  r.route_blocking.assign(R, 0.0);
  std::vector<double> offered(R);
  for (std::size_t i = 0; i < R; ++i) offered[i] = spec.routes[i].offered;
  const double lam_total = std::accumulate(offered.begin(), offered.end(), 0.0);
  if (max_arrivals == 0 || lam_total == 0.0) return r;

  // The first tenth of the arrivals is a warm-up from the empty state.
  const std::size_t warm = max_arrivals / 10;
  std::vector<int> busy(spec.links.size(), 0);
  std::vector<double> calls(R, 0.0);
  double calls_total = 0.0;
  std::size_t seen = 0;
  while (seen < max_arrivals + warm) {
    const double u = uniform01(stream);
    if (u <= lam_total / (lam_total + calls_total)) {
      const std::size_t i = pick(offered, lam_total, stream);
      const bool counted = seen >= warm;
      ++seen;
      bool fits = true;
      for (std::size_t l : spec.routes[i].links) fits = fits && busy[l] < spec.links[l].capacity;
      if (counted) ++r.route_arrivals[i];
      if (fits) {
        for (std::size_t l : spec.routes[i].links) ++busy[l];
        calls[i] += 1.0;
        calls_total += 1.0;
      } else if (counted) {
        ++r.route_blocked[i];
      }
    } else {
      const std::size_t i = pick(calls, calls_total, stream);
      for (std::size_t l : spec.routes[i].links) --busy[l];
      calls[i] -= 1.0;
      calls_total -= 1.0;
    }
  }
  for (std::size_t i = 0; i < R; ++i)
    if (r.route_arrivals[i] > 0) r.route_blocking[i] = static_cast<double>(r.route_blocked[i]) / static_cast<double>(r.route_arrivals[i]);
  return r;
}

InspectorDemo poisson_inspector_paradox_demo(double lambda, double T, std::size_t picks, RngStream& stream) {
  if (!(lambda > 0.0) || !(T > 0.0)) throw ParameterError("need lambda > 0 and T > 0");
  if (picks == 0) throw ParameterError("need at least one pick");
  RngStream arr = stream.substream(0), insp = stream.substream(1);
  std::vector<double> t;
  for (double x = exp_deviate(arr, lambda); x <= T; x += exp_deviate(arr, lambda)) t.push_back(x);
  if (t.size() < 2) throw ParameterError("horizon too short for two arrivals");
  InspectorDemo d;
  d.picks = picks;
  d.interval_mean = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < picks; ++i) {
    const double x = t.front() + (t.back() - t.front()) * uniform01(insp);
    auto hi = std::upper_bound(t.begin(), t.end(), x);
    if (hi == t.end()) --hi;
    sum += *hi - *(hi - 1);
  }
  d.straddling_mean = sum / static_cast<double>(picks);
  return d;
}

MultiReplicationSummary run_replications_multi(std::size_t n, const RngStream& stream,
                                               const std::function<std::vector<double>(RngStream&)>& run,
                                               double confidence, unsigned threads) {
  if (n < 2) throw ParameterError("need at least two replications for a confidence interval");
  MultiReplicationSummary s;
  s.observations.assign(n, {});
  const unsigned workers = std::max(1u, threads);
  for (std::size_t base = 0; base < n; base += workers) {
    std::vector<std::future<std::vector<double>>> batch;
    const std::size_t end = std::min(n, base + workers);
    for (std::size_t i = base; i < end; ++i) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, [&run, &stream, i] {
        RngStream sub = stream.substream(i);
        return run(sub);
      }));
    }
    for (std::size_t i = base; i < end; ++i) s.observations[i] = batch[i - base].get();
  }
  const std::size_t m = s.observations[0].size();
  for (const auto& row : s.observations)
    if (row.size() != m) throw ParameterError("replications returned different numbers of metrics");
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = s.observations[i][j];
    s.ci.push_back(confidence_interval(col, confidence));
  }
  return s;
}

ReplicationSummary run_replications(std::size_t n, const RngStream& stream, const std::function<double(RngStream&)>& run,
                                     double confidence, unsigned threads) {
  const auto multi = run_replications_multi(
      n, stream, [&run](RngStream& s) { return std::vector<double>{run(s)}; }, confidence, threads);
  ReplicationSummary s;
  for (const auto& row : multi.observations) s.observations.push_back(row[0]);
  s.ci = multi.ci[0];
  return s;
}

}  // namespace teletraffic
