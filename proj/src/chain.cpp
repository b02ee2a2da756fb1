#include "teletraffic/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teletraffic/errors.hpp"

namespace teletraffic {

void BirthDeathSpec::validate() const {
  if (birth.size() != death.size()) throw ParameterError("birth and death vectors differ in length");
  for (double b : birth)
    if (!(b >= 0.0)) throw ParameterError("birth rates must be non-negative");
  for (double d : death)
    if (!(d >= 0.0)) throw ParameterError("death rates must be non-negative");
  if (!(full_arrival_rate >= 0.0)) throw ParameterError("full-state arrival rate must be non-negative");
  if (!birth.empty() && std::none_of(birth.begin(), birth.end(), [](double b) { return b > 0.0; }))
    throw ParameterError("at least one birth rate must be positive");
}

BirthDeathSpec bd_constant(double lambda, double mu, std::size_t K) {
  BirthDeathSpec s;
  s.birth.assign(K, lambda);
  s.death.assign(K, mu);
  s.full_arrival_rate = lambda;
  return s;
}

BirthDeathSpec bd_multi_server(double lambda, double mu, int k, int N) {
  if (k < 1 || N < k) throw ParameterError("need 1 <= k <= N");
  BirthDeathSpec s;
  for (int i = 0; i < N; ++i) {
    s.birth.push_back(lambda);
    s.death.push_back(std::min(i + 1, k) * mu);
  }
  s.full_arrival_rate = lambda;
  return s;
}

BirthDeathSpec bd_engset(int M, int k, double lambda_hat, double mu) {
  if (M < 1 || k < 0) throw ParameterError("need M >= 1 and k >= 0");
  const int K = std::min(M, k);
  BirthDeathSpec s;
  for (int i = 0; i < K; ++i) {
    s.birth.push_back((M - i) * lambda_hat);
    s.death.push_back((i + 1) * mu);
  }
  s.full_arrival_rate = (M - K) * lambda_hat;
  return s;
}

std::vector<double> bd_steady_state(const BirthDeathSpec& spec) {
  spec.validate();
  const std::size_t K = spec.max_state();
  std::vector<double> logw(K + 1, -std::numeric_limits<double>::infinity());
  logw[0] = 0.0;
  for (std::size_t i = 1; i <= K; ++i) {
    const double b = spec.birth[i - 1];
    const double d = spec.death[i - 1];
    if (b == 0.0) break;
    if (d == 0.0) throw SingularityError("zero death rate at reachable state " + std::to_string(i));
    logw[i] = logw[i - 1] + std::log(b) - std::log(d);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> pi(K + 1);
  double total = 0.0;
  for (std::size_t i = 0; i <= K; ++i) {
    pi[i] = std::exp(logw[i] - top);
    total += pi[i];
  }
  for (double& p : pi) p /= total;
  return pi;
}

double bd_blocking(const BirthDeathSpec& spec, const std::vector<double>& dist) {
  const std::size_t K = spec.max_state();
  if (dist.size() != K + 1) throw ParameterError("distribution does not match chain size");
  double offered = spec.full_arrival_rate * dist[K];
  const double lost = offered;
  for (std::size_t i = 0; i < K; ++i) offered += spec.birth[i] * dist[i];
  return offered > 0.0 ? lost / offered : 0.0;
}

double bd_first_passage_mean(const BirthDeathSpec& spec, std::size_t from, std::size_t to) {
  spec.validate();
  const std::size_t K = spec.max_state();
  if (from > K || to > K) throw ParameterError("state out of range");
  if (from == to) return 0.0;
  double total = 0.0;
  if (to > from) {
    std::size_t low = from;
    while (low > 0 && spec.death[low - 1] > 0.0) --low;
    double U = 0.0;
    for (std::size_t m = low; m < to; ++m) {
      const double b = spec.birth[m];
      if (!(b > 0.0)) throw ParameterError("state " + std::to_string(to) + " unreachable: zero birth rate at " + std::to_string(m));
      const double d = m > low ? spec.death[m - 1] : 0.0;
      U = 1.0 / b + (d / b) * U;
      if (m >= from) total += U;
    }
  } else {
    std::size_t high = from;
    while (high < K && spec.birth[high] > 0.0) ++high;
    double D = 0.0;
    for (std::size_t m = high; m > to; --m) {
      const double d = spec.death[m - 1];
      if (!(d > 0.0)) throw ParameterError("state " + std::to_string(to) + " unreachable: zero death rate at " + std::to_string(m));
      const double b = m < high ? spec.birth[m] : 0.0;
      D = 1.0 / d + (b / d) * D;
      if (m <= from) total += D;
    }
  }
  return total;
}

void GeneratorMatrix::add(Eigen::Index i, Eigen::Index j, double rate) {
  if (i == j || rate == 0.0) return;
  q(i, j) += rate;
  q(i, i) -= rate;
}

void GeneratorMatrix::validate(double tol) const {
  if (q.rows() != q.cols()) throw ParameterError("generator must be square");
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (i == j) continue;
      if (q(i, j) < 0.0) throw ParameterError("negative off-diagonal generator entry");
      off += q(i, j);
    }
    if (std::abs(off + q(i, i)) > tol * std::max(1.0, off)) throw ParameterError("generator row does not sum to zero");
  }
}

GeneratorMatrix GeneratorMatrix::from_birth_death(const BirthDeathSpec& spec) {
  spec.validate();
  const auto K = static_cast<Eigen::Index>(spec.max_state());
  GeneratorMatrix g(K + 1);
  for (Eigen::Index i = 0; i < K; ++i) {
    g.add(i, i + 1, spec.birth[static_cast<std::size_t>(i)]);
    g.add(i + 1, i, spec.death[static_cast<std::size_t>(i)]);
  }
  return g;
}

double ctmc_residual(const GeneratorMatrix& Q, const std::vector<double>& pi) {
  Eigen::Map<const Eigen::VectorXd> p(pi.data(), static_cast<Eigen::Index>(pi.size()));
  return (p.transpose() * Q.q).cwiseAbs().maxCoeff();
}

namespace {

CtmcSolution solve_direct(const GeneratorMatrix& Q) {
  const Eigen::Index n = Q.size();
  Eigen::MatrixXd A = Q.q.transpose();
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularityError("generator is singular; chain is not irreducible");
  Eigen::VectorXd x = lu.solve(b);
  CtmcSolution sol;
  sol.pi.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    sol.pi[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
    total += sol.pi[static_cast<std::size_t>(i)];
  }
  for (double& p : sol.pi) p /= total;
  sol.residual = ctmc_residual(Q, sol.pi);
  sol.used_direct = true;
  return sol;
}

}  // namespace

CtmcSolution ctmc_solve(const GeneratorMatrix& Q, const CtmcOptions& opt) {
  Q.validate(1e-9);
  const Eigen::Index n = Q.size();
  if (n == 0) throw ParameterError("empty generator");
  if (n == 1) return CtmcSolution{{1.0}, 0.0, 0, false};
  for (Eigen::Index j = 0; j < n; ++j)
    if (Q.q(j, j) == 0.0) throw SingularityError("state " + std::to_string(j) + " has no exits; chain is not irreducible");
  if (opt.method == CtmcMethod::direct) return solve_direct(Q);
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw ParameterError("damping must be in (0,1]");

  // Column-wise nonzero lists: incoming rates to each state.
  std::vector<std::vector<std::pair<Eigen::Index, double>>> in(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && Q.q(i, j) != 0.0) in[static_cast<std::size_t>(j)].emplace_back(i, Q.q(i, j));

  std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  double best = std::numeric_limits<double>::infinity();
  long since_best = 0;
  double res = 0.0;
  for (long it = 1; it <= opt.max_iter; ++it) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double flow = 0.0;
      for (const auto& [i, r] : in[static_cast<std::size_t>(j)]) flow += pi[static_cast<std::size_t>(i)] * r;
      const double v = flow / -Q.q(j, j);
      auto& pj = pi[static_cast<std::size_t>(j)];
      pj = (1.0 - opt.damping) * pj + opt.damping * v;
    }
    double total = 0.0;
    for (double p : pi) total += p;
    for (double& p : pi) p /= total;
    res = ctmc_residual(Q, pi);
    if (res < opt.tol) return CtmcSolution{pi, res, it, false};
    if (res < best * (1.0 - 1e-6)) {
      best = res;
      since_best = 0;
    } else if (++since_best >= opt.stall_window) {
      CtmcSolution sol = solve_direct(Q);
      sol.iterations = it;
      if (sol.residual < opt.tol) return sol;
      throw ConvergenceError("successive substitution stalled and direct solve missed tolerance", sol.residual, it);
    }
  }
  throw ConvergenceError("successive substitution did not converge", res, opt.max_iter);
}

Mmpp2Chain mmpp2_m1n_build(double lambda0, double lambda1, double delta0, double delta1, double mu, int N) {
  if (N < 1) throw ParameterError("MMPP(2)/M/1/N needs N >= 1");
  for (double r : {lambda0, lambda1, delta0, delta1, mu})
    if (!(r >= 0.0)) throw ParameterError("MMPP(2)/M/1/N rates must be non-negative");
  Mmpp2Chain c{GeneratorMatrix(2 * (N + 1)), {}, lambda0, lambda1, delta0, delta1, mu, N};
  const double lam[2] = {lambda0, lambda1};
  const double del[2] = {delta0, delta1};
  for (int i = 0; i <= N; ++i) {
    for (int m = 0; m < 2; ++m) {
      c.labels.emplace_back(i, m);
      const auto s = c.index(i, m);
      if (i < N) c.Q.add(s, c.index(i + 1, m), lam[m]);
      if (i > 0) c.Q.add(s, c.index(i - 1, m), mu);
      c.Q.add(s, c.index(i, 1 - m), del[m]);
    }
  }
  return c;
}

Mmpp2Metrics mmpp2_m1n_metrics(const Mmpp2Chain& c, const std::vector<double>& pi) {
  if (pi.size() != static_cast<std::size_t>(2 * (c.N + 1))) throw ParameterError("distribution does not match chain");
  Mmpp2Metrics m{};
  double idle = 0.0;
  for (int i = 0; i <= c.N; ++i) {
    for (int k = 0; k < 2; ++k) {
      const double p = pi[static_cast<std::size_t>(c.index(i, k))];
      m.mode_probs[k] += p;
      m.mean_queue += i * p;
      if (i == 0) idle += p;
    }
  }
  m.lambda_av = c.lambda0 * m.mode_probs[0] + c.lambda1 * m.mode_probs[1];
  const double lost = c.lambda0 * pi[static_cast<std::size_t>(c.index(c.N, 0))] + c.lambda1 * pi[static_cast<std::size_t>(c.index(c.N, 1))];
  m.blocking = m.lambda_av > 0.0 ? lost / m.lambda_av : 0.0;
  m.utilization = 1.0 - idle;
  return m;
}

std::vector<double> mmpp2_m1n_level_reduction(const Mmpp2Chain& c) {
  // Censored level block kept as off-diagonals (b: 0->1, e: 1->0) plus the
  // downward outflow x; the diagonal is implied, so no subtraction occurs.
  struct Block {
    double b, e, x;
    // (-U)^{-1} = [[e+x, b], [e, b+x]] / det
    double det() const { return b * x + e * x + x * x; }
  };
  const double lam[2] = {c.lambda0, c.lambda1};
  const std::size_t N = static_cast<std::size_t>(c.N);
  std::vector<Block> U(N + 1);
  U[N] = {c.delta0, c.delta1, c.mu};
  for (std::size_t i = N; i-- > 0;) {
    const Block& u = U[i + 1];
    const double det = u.det();
    // G = diag(lam) (-U)^{-1} diag(mu); only its off-diagonal is needed
    const double g01 = lam[0] * u.b * c.mu / det;
    const double g10 = lam[1] * u.e * c.mu / det;
    U[i] = {c.delta0 + g01, c.delta1 + g10, i > 0 ? c.mu : 0.0};
  }
  std::vector<double> pi(2 * (N + 1));
  pi[0] = U[0].e;
  pi[1] = U[0].b;
  for (std::size_t i = 0; i < N; ++i) {
    const Block& u = U[i + 1];
    const double det = u.det();
    const double v0 = pi[2 * i] * lam[0], v1 = pi[2 * i + 1] * lam[1];
    pi[2 * i + 2] = (v0 * (u.e + u.x) + v1 * u.e) / det;
    pi[2 * i + 3] = (v0 * u.b + v1 * (u.b + u.x)) / det;
  }
  double total = 0.0;
  for (double p : pi) total += p;
  for (double& p : pi) p /= total;
  return pi;
}

GeneratorMatrix mem1n_generator(double lambda, double mu, int m, int N) {
  if (!(lambda > 0.0) || !(mu > 0.0) || m < 1 || N < 1) throw ParameterError("M/Em/1/N needs lambda, mu > 0, m >= 1, N >= 1");
  const int P = m * N;
  GeneratorMatrix g(P + 1);
  for (int p = 0; p <= P; ++p) {
    const int customers = (p + m - 1) / m;
    if (customers < N) g.add(p, p + m, lambda);
    if (p > 0) g.add(p, p - 1, m * mu);
  }
  return g;
}

Mem1nResult mem1n_solve(double lambda, double mu, int m, int N, const CtmcOptions& opt) {
  const GeneratorMatrix g = mem1n_generator(lambda, mu, m, N);
  Mem1nResult r;
  r.phase_dist = ctmc_solve(g, opt).pi;
  r.customer_dist.assign(static_cast<std::size_t>(N + 1), 0.0);
  for (std::size_t p = 0; p < r.phase_dist.size(); ++p) {
    const std::size_t i = (p + static_cast<std::size_t>(m) - 1) / static_cast<std::size_t>(m);
    r.customer_dist[i] += r.phase_dist[p];
  }
  r.blocking = r.customer_dist.back();
  r.mean_queue = 0.0;
  for (std::size_t i = 0; i < r.customer_dist.size(); ++i) r.mean_queue += static_cast<double>(i) * r.customer_dist[i];
  r.mean_delay = r.mean_queue / (lambda * (1.0 - r.blocking));
  return r;
}

DtQueueResult dt_queue_solve(const Pmf& arrival_pmf, double tail_tol, std::size_t max_states) {
  if (arrival_pmf.support_min < 0) throw ParameterError("arrival pmf must be on non-negative integers");
  // a[x] = P(A = x) from x = 0.
  std::vector<double> a(static_cast<std::size_t>(arrival_pmf.support_min), 0.0);
  a.insert(a.end(), arrival_pmf.probabilities.begin(), arrival_pmf.probabilities.end());
  const double a0 = a[0];
  if (!(a0 > 0.0)) throw ParameterError("degenerate arrival pmf: a_0 = 0, queue never empties");
  double mean = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) mean += static_cast<double>(x) * a[x];
  if (mean >= 1.0) throw InstabilityError("discrete-time queue unstable: mean arrivals per slot >= 1");

  // tail[m] = P(A >= m)
  std::vector<double> tail(a.size() + 1, 0.0);
  for (std::size_t m = a.size(); m-- > 0;) tail[m] = tail[m + 1] + a[m];
  auto T = [&](std::size_t m) { return m < tail.size() ? tail[m] : 0.0; };

  DtQueueResult r;
  r.pi0 = (1.0 - mean) / a0;
  r.idle_fraction = r.pi0 * a0;
  r.pi.push_back(r.pi0);
  double mass = r.pi0;
  const std::size_t amax = a.size() - 1;
  // Level crossing between n and n+1: pi_{n+1} a_0 = sum_i pi_i P(A >= n+2-i).
  while (1.0 - mass > tail_tol && r.pi.size() < max_states) {
    const std::size_t n = r.pi.size() - 1;
    double s = 0.0;
    const std::size_t lo = n + 2 > amax ? n + 2 - amax : 0;
    for (std::size_t i = lo; i <= n; ++i) s += r.pi[i] * T(n + 2 - i);
    const double next = s / a0;
    r.pi.push_back(next);
    mass += next;
    if (next == 0.0 && r.pi.size() > amax) {
      bool all_zero = true;
      for (std::size_t i = r.pi.size() - amax; i < r.pi.size(); ++i) all_zero = all_zero && r.pi[i] == 0.0;
      if (all_zero) break;
    }
  }
  while (r.pi.size() > 1 && r.pi.back() == 0.0) r.pi.pop_back();
  r.mean_queue = 0.0;
  for (std::size_t n = 0; n < r.pi.size(); ++n) r.mean_queue += static_cast<double>(n) * r.pi[n];

  auto P = [&](std::size_t i) { return i < r.pi.size() ? r.pi[i] : 0.0; };
  auto A = [&](std::size_t x) { return x < a.size() ? a[x] : 0.0; };
  r.max_residual = std::abs(P(0) - P(0) * (A(0) + A(1)) - P(1) * A(0));
  for (std::size_t n = 1; n + 1 < r.pi.size(); ++n) {
    double rhs = P(0) * A(n + 1);
    for (std::size_t i = 1; i <= n + 1; ++i) rhs += P(i) * A(n + 1 - i);
    r.max_residual = std::max(r.max_residual, std::abs(P(n) - rhs));
  }
  return r;
}

}  // namespace teletraffic
