#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "teletraffic/network.hpp"
#include "teletraffic/rng.hpp"
#include "teletraffic/stats.hpp"

namespace teletraffic {

// A source of nonnegative deviates (inter-arrival or service times).
using Deviate = std::function<double(RngStream&)>;

Deviate exponential_source(double rate);
Deviate deterministic_source(double value);
Deviate uniform_source(double a, double b);
// Pareto with the given mean; needs gamma > 1.
Deviate pareto_source(double gamma, double mean);
// Replays values in order and wraps around at the end.
Deviate trace_source(std::vector<double> values);

enum class Discipline { fifo, lifo_preemptive, priority_nonpreemptive };

struct ArrivalRecord {
  double arrival_time = 0.0;
  double service_duration = 0.0;
  int queue_size_on_arrival = 0;  // customers in the system, arrival excluded
  double service_start = 0.0;     // first time in service
  double service_end = 0.0;
  double delay = 0.0;             // service_end - arrival_time
  int cls = 0;
  bool blocked = false;
};

struct DesConfig {
  int servers = 1;
  std::optional<int> capacity;  // total in system; empty means infinite
  Discipline discipline = Discipline::fifo;
  std::size_t horizon = 0;  // arrivals
  double warmup_fraction = 0.1;
  bool keep_ledger = true;
  // Poisson inspector rate; 0 disables the inspector estimator.
  double inspector_rate = 0.0;
  // Priority classes (0 is highest). Empty means a single class that uses
  // the service source passed to the engine.
  std::vector<double> class_probs;
  std::vector<Deviate> class_services;
};

struct DesResult {
  std::vector<ArrivalRecord> ledger;  // every arrival, warm-up included
  std::size_t arrivals = 0;           // counted after warm-up
  std::size_t blocked = 0;
  double blocking = 0.0;
  double mean_delay = 0.0;  // served customers after warm-up
  double mean_wait = 0.0;
  std::vector<double> class_mean_delay;
  std::vector<double> class_mean_wait;
  double mean_queue_pasta = 0.0;      // average of queue_size_on_arrival
  double mean_queue_time = 0.0;       // time-weighted
  std::optional<double> mean_queue_inspector;
  std::vector<double> time_fraction;  // fraction of time with i in the system
  double utilization = 0.0;           // mean busy servers / servers
  std::vector<double> departure_times;
  std::vector<double> busy_periods;
  double window_start = 0.0;
  double window_end = 0.0;
};

// Event-driven G/G/k/N engine. Streams for arrivals, service, class marks
// and the inspector are substreams 0..3 of `stream`. On equal timestamps
// departures are processed before arrivals. The statistics window runs from
// the first post-warm-up arrival to the last arrival; accepted customers are
// then served to completion so the ledger is complete.
DesResult des_single_server(const Deviate& interarrival, const Deviate& service, const DesConfig& cfg, RngStream& stream);
DesResult des_multi_server(int k, std::optional<int> capacity, const Deviate& interarrival, const Deviate& service,
                           std::size_t horizon, RngStream& stream, DesConfig cfg = {});

// Markov-chain random walk for the M/M/1 mean queue size, measured at
// arrivals before the increment.
double mc_mm1(double lambda, double mu, std::size_t max_measurements, RngStream& stream);

struct McLossResult {
  double blocking = 0.0;
  std::size_t arrivals = 0;
  std::size_t blocked = 0;
};

McLossResult mc_mmkk(double lambda, double mu, int k, std::size_t max_arrivals, RngStream& stream);

struct CellularSpec {
  int cells = 0;
  int channels = 0;
  std::vector<double> new_call_rate;                // lambda(i)
  double mu = 1.0;                                  // 1 / mean holding time
  std::vector<double> handover_rate;                // delta(i), per call
  std::vector<std::vector<double>> routing;         // P(i,j); zero off the neighbor set

  void validate() const;
};

struct CellularResult {
  double blocking = 0.0;  // sum N_b / MAXN_a
  std::vector<double> cell_blocking;
  std::vector<std::size_t> arrivals;
  std::vector<std::size_t> blocked;
  std::vector<std::size_t> handovers;
  std::vector<std::size_t> handovers_dropped;  // target cell full
};

// One uniform draw selects the event type, one the cell, one the handover
// target. A handover into a full cell drops the call.
CellularResult cellular_sim(const CellularSpec& spec, std::size_t max_arrivals, RngStream& stream);

struct LossNetworkSimResult {
  std::vector<double> route_blocking;
  std::vector<std::size_t> route_arrivals;
  std::vector<std::size_t> route_blocked;
};

// Markov-chain simulation of a circuit-switched network; unit mean holding
// time, so route arrival rates equal the offered loads.
LossNetworkSimResult loss_network_sim(const CircuitNetworkSpec& spec, std::size_t max_arrivals, RngStream& stream);

struct InspectorDemo {
  double straddling_mean = 0.0;  // interval that contains a random instant
  double interval_mean = 0.0;    // plain inter-arrival mean
  std::size_t picks = 0;
};

InspectorDemo poisson_inspector_paradox_demo(double lambda, double T, std::size_t picks, RngStream& stream);

struct ReplicationSummary {
  std::vector<double> observations;
  ConfidenceInterval ci;
};

// Replication i runs on stream.substream(i). With threads > 1 the
// replications run concurrently; the observations do not depend on it.
ReplicationSummary run_replications(std::size_t n, const RngStream& stream, const std::function<double(RngStream&)>& run,
                                    double confidence = 0.95, unsigned threads = 1);

struct MultiReplicationSummary {
  std::vector<std::vector<double>> observations;  // [replication][metric]
  std::vector<ConfidenceInterval> ci;             // per metric
};

// Same scheme for runs that report several metrics; every run must return
// the same number of values.
MultiReplicationSummary run_replications_multi(std::size_t n, const RngStream& stream,
                                               const std::function<std::vector<double>(RngStream&)>& run,
                                               double confidence = 0.95, unsigned threads = 1);

}  // namespace teletraffic
