#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "teletraffic/rng.hpp"

namespace teletraffic {

// Birth-death chain on states 0..K. birth[i] is the rate i -> i+1 (i < K),
// death[i] is the rate i+1 -> i. full_arrival_rate is the intensity of
// arrivals attempted (and lost) in state K; it only feeds bd_blocking.
struct BirthDeathSpec {
  std::vector<double> birth;
  std::vector<double> death;
  double full_arrival_rate = 0.0;

  std::size_t max_state() const { return birth.size(); }
  void validate() const;
};

BirthDeathSpec bd_constant(double lambda, double mu, std::size_t K);
// lambda, min(i,k) mu on 0..N; lost arrivals at rate lambda in N.
BirthDeathSpec bd_multi_server(double lambda, double mu, int k, int N);
// Engset: (M-i) lambda_hat, i mu on 0..k.
BirthDeathSpec bd_engset(int M, int k, double lambda_hat, double mu);

std::vector<double> bd_steady_state(const BirthDeathSpec& spec);
double bd_blocking(const BirthDeathSpec& spec, const std::vector<double>& dist);
// Mean first passage time between two states. Upward (j > i) uses
// U_m = 1/b_m + (d_m/b_m) U_{m-1}; downward uses the mirror recursion
// from the top state.
double bd_first_passage_mean(const BirthDeathSpec& spec, std::size_t from, std::size_t to);

struct GeneratorMatrix {
  Eigen::MatrixXd q;

  explicit GeneratorMatrix(Eigen::Index n = 0) : q(Eigen::MatrixXd::Zero(n, n)) {}
  Eigen::Index size() const { return q.rows(); }
  // Add rate on (i,j) and keep the diagonal consistent.
  void add(Eigen::Index i, Eigen::Index j, double rate);
  void validate(double tol = 1e-12) const;
  static GeneratorMatrix from_birth_death(const BirthDeathSpec& spec);
};

enum class CtmcMethod { successive_substitution, direct };

struct CtmcOptions {
  CtmcMethod method = CtmcMethod::successive_substitution;
  double tol = 1e-12;
  long max_iter = 200000;
  double damping = 1.0;
  long stall_window = 100;
};

struct CtmcSolution {
  std::vector<double> pi;
  double residual = 0.0;
  long iterations = 0;
  bool used_direct = false;
};

double ctmc_residual(const GeneratorMatrix& Q, const std::vector<double>& pi);
CtmcSolution ctmc_solve(const GeneratorMatrix& Q, const CtmcOptions& opt = {});

struct Mmpp2Chain {
  GeneratorMatrix Q;
  std::vector<std::pair<int, int>> labels;  // (customers i, mode m)
  double lambda0, lambda1, delta0, delta1, mu;
  int N;

  Eigen::Index index(int i, int m) const { return 2 * i + m; }
};

// States ordered 00, 01, 10, 11, ..., N0, N1.
Mmpp2Chain mmpp2_m1n_build(double lambda0, double lambda1, double delta0, double delta1, double mu, int N);

struct Mmpp2Metrics {
  double blocking;
  double lambda_av;
  double mode_probs[2];
  double mean_queue;
  double utilization;
};

Mmpp2Metrics mmpp2_m1n_metrics(const Mmpp2Chain& chain, const std::vector<double>& pi);

// Same stationary vector by censoring levels from the top down. Every step
// multiplies nonnegative matrices, so tail probabilities far below machine
// epsilon keep their relative accuracy (the dense solvers lose them).
std::vector<double> mmpp2_m1n_level_reduction(const Mmpp2Chain& chain);

struct Mem1nResult {
  std::vector<double> phase_dist;     // phases 0..mN
  std::vector<double> customer_dist;  // customers 0..N
  double blocking;
  double mean_queue;
  double mean_delay;
};

GeneratorMatrix mem1n_generator(double lambda, double mu, int m, int N);
Mem1nResult mem1n_solve(double lambda, double mu, int m, int N, const CtmcOptions& opt = {CtmcMethod::direct});

struct DtQueueResult {
  std::vector<double> pi;  // queue size at slot boundaries
  double pi0;
  double idle_fraction;
  double mean_queue;
  double max_residual;  // largest balance-equation residual over the support
};

// Discrete-time single-server queue, one departure per slot, arrivals per
// slot from arrival_pmf (support_min must be 0).
DtQueueResult dt_queue_solve(const Pmf& arrival_pmf, double tail_tol = 1e-12, std::size_t max_states = 10000000);

}  // namespace teletraffic
