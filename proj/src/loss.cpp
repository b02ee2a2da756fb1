#include "teletraffic/loss.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "teletraffic/chain.hpp"
#include "teletraffic/errors.hpp"

namespace teletraffic {

namespace {

void check_load(double A, int k) {
  if (!(A >= 0.0) || !std::isfinite(A)) throw ParameterError("offered load A must be a non-negative number");
  if (k < 0) throw ParameterError("number of servers k must be non-negative");
}

}  // namespace

double erlang_b_next(double A, int k, double previous) {
  check_load(A, k);
  if (k < 1) throw ParameterError("k must be at least 1");
  if (!(previous >= 0.0 && previous <= 1.0)) throw ParameterError("previous blocking must be in [0,1]");
  return A * previous / (k + A * previous);
}

double erlang_b(double A, int k) {
  check_load(A, k);
  double E = 1.0;
  for (int m = 1; m <= k; ++m) E = A * E / (m + A * E);
  return E;
}

std::vector<double> erlang_b_table(double A, int kmax) {
  check_load(A, kmax);
  std::vector<double> E(static_cast<std::size_t>(kmax) + 1);
  E[0] = 1.0;
  for (int m = 1; m <= kmax; ++m) E[static_cast<std::size_t>(m)] = A * E[static_cast<std::size_t>(m) - 1] / (m + A * E[static_cast<std::size_t>(m) - 1]);
  return E;
}

double erlang_b_inverse_recursion(double A, int k) {
  check_load(A, k);
  if (k == 0) return 1.0;
  if (A == 0.0) return 0.0;
  double I = 1.0;
  for (int m = 1; m <= k; ++m) I = 1.0 + (m / A) * I;
  return 1.0 / I;
}

double erlang_b_jagerman(double A, int k, double rel_tol) {
  check_load(A, k);
  if (!(A > 0.0)) throw ParameterError("Jagerman integral needs A > 0");
  if (k == 0) return 1.0;
  // Integrand on t = A y: exp(-t) (1 + t/A)^k, scaled by its peak at t* = k - A.
  const double kd = static_cast<double>(k);
  const double tpeak = std::max(0.0, kd - A);
  auto logf = [&](double t) { return -t + kd * std::log1p(t / A); };
  const double top = logf(tpeak);
  auto f = [&](double t) { return std::exp(logf(t) - top); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err_left = 0.0, err_right = 0.0;
  double left = 0.0;
  if (tpeak > 0.0) left = GK::integrate(f, 0.0, tpeak, 20, rel_tol * 1e-2, &err_left);
  const double right = GK::integrate(f, tpeak, std::numeric_limits<double>::infinity(), 20, rel_tol * 1e-2, &err_right);
  const double J = left + right;
  if (!(J > 0.0) || err_left + err_right > rel_tol * J)
    throw ConvergenceError("Jagerman quadrature did not reach tolerance", (err_left + err_right) / J, 0);
  // E = 1 / I = exp(-top) / J
  return std::exp(-top) / J;
}

LossResult mmkk_stats(double A, int k) {
  check_load(A, k);
  LossResult r;
  r.offered = A;
  r.state_dist.assign(static_cast<std::size_t>(k) + 1, 0.0);
  if (A == 0.0) {
    r.state_dist[0] = 1.0;
  } else {
    std::vector<double> logw(r.state_dist.size());
    for (int i = 0; i <= k; ++i) logw[static_cast<std::size_t>(i)] = i * std::log(A) - std::lgamma(i + 1.0);
    const double top = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logw.size(); ++i) total += (r.state_dist[i] = std::exp(logw[i] - top));
    for (double& p : r.state_dist) p /= total;
  }
  r.blocking = erlang_b(A, k);
  r.carried = A * (1.0 - r.blocking);
  r.overflow = A * r.blocking;
  r.utilization = k > 0 ? r.carried / k : 0.0;
  return r;
}

OverflowTraffic overflow_of(double A, int k) {
  check_load(A, k);
  OverflowTraffic o;
  o.mean = A * erlang_b(A, k);
  o.variance = o.mean * (1.0 - o.mean + A / (k + 1.0 + o.mean - A));
  if (o.mean > 0.0) o.peakedness = o.variance / o.mean;
  return o;
}

ErmEquivalent erm_equivalent(double M, double V, NeqRounding rounding) {
  if (!(M > 0.0) || !(V > 0.0)) throw ParameterError("ERM needs positive mean and variance");
  const double Z = V / M;
  if (!(Z > 0.0)) throw ParameterError("peakedness must be positive");
  const double denom = M + Z - 1.0;
  if (!(denom > 0.0)) throw ParameterError("ERM equivalent undefined for M + Z <= 1");
  ErmEquivalent e;
  e.a_eq = V + 3.0 * Z * (Z - 1.0);
  e.n_eq_exact = e.a_eq * (M + Z) / denom - M - 1.0;
  const double r = rounding == NeqRounding::nearest ? std::round(e.n_eq_exact) : std::floor(e.n_eq_exact);
  e.n_eq = static_cast<int>(std::max(0.0, r));
  return e;
}

double erm_blocking(double M, double V, int k2, NeqRounding rounding) {
  if (k2 < 0) throw ParameterError("secondary servers k2 must be non-negative");
  const ErmEquivalent e = erm_equivalent(M, V, rounding);
  const std::vector<double> E = erlang_b_table(e.a_eq, e.n_eq + k2);
  return E.back() / E[static_cast<std::size_t>(e.n_eq)];
}

double hayward_blocking(double M, double V, int k2) {
  if (!(M > 0.0) || !(V > 0.0)) throw ParameterError("Hayward needs positive mean and variance");
  if (k2 < 0) throw ParameterError("secondary servers k2 must be non-negative");
  const double Z = V / M;
  const int keq = static_cast<int>(std::lround(k2 / Z));
  return erlang_b(M / Z, keq);
}

double engset_blocking(int M, int k, double rho_hat) {
  if (M < 1 || k < 0) throw ParameterError("Engset needs M >= 1 and k >= 0");
  if (!(rho_hat > 0.0)) throw ParameterError("Engset intensity must be positive");
  if (k >= M) return 0.0;
  double B = 1.0;
  for (int i = 1; i <= k; ++i) {
    const double x = rho_hat * (M - i) * B;
    B = x / (i + x);
  }
  return B;
}

EngsetLoads engset_loads(int M, int k, double rho_hat) {
  EngsetLoads r;
  r.blocking = engset_blocking(M, k, rho_hat);
  r.state_dist = bd_steady_state(bd_engset(M, k, rho_hat, 1.0));
  r.intended = rho_hat * M / (1.0 + rho_hat);
  r.offered = rho_hat * M / (1.0 + rho_hat * (1.0 - r.blocking));
  r.carried = r.offered * (1.0 - r.blocking);
  return r;
}

double engset_from_offered(int M, int k, double offered, double tol, int max_iter) {
  if (M < 1 || k < 0) throw ParameterError("Engset needs M >= 1 and k >= 0");
  if (!(offered > 0.0 && offered < M)) throw ParameterError("offered load must lie in (0, M)");
  if (k >= M) return 0.0;
  double P = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const double rho_hat = offered / (M - offered * (1.0 - P));
    const double next = engset_blocking(M, k, rho_hat);
    if (std::abs(next - P) < tol) return next;
    P = next;
  }
  throw ConvergenceError("Engset offered-load iteration did not converge", P, max_iter);
}

double multiclass_erlang_b(const std::vector<TrafficLoad>& loads, int k) {
  double A = 0.0;
  for (const auto& l : loads) {
    if (!(l.erlangs() >= 0.0)) throw ParameterError("class loads must be non-negative");
    A += l.erlangs();
  }
  return erlang_b(A, k);
}

std::vector<std::optional<double>> mmkk_preemptive_priority(const std::vector<double>& loads, int k) {
  std::vector<std::optional<double>> out;
  double prev_S = 0.0, prev_term = 0.0;
  for (double a : loads) {
    if (!(a >= 0.0)) throw ParameterError("class loads must be non-negative");
    const double S = prev_S + a;
    const double term = S * erlang_b(S, k);
    if (a > 0.0) out.emplace_back((term - prev_term) / a);
    else out.emplace_back(std::nullopt);
    prev_S = S;
    prev_term = term;
  }
  return out;
}

double saturated_blocking(double lambda, double mu, int k) {
  if (!(lambda > 0.0) || !(mu > 0.0) || k < 0) throw ParameterError("saturated model needs positive rates");
  const double A = lambda / mu;
  if (!(A > k)) throw ParameterError("system not saturated: A = " + std::to_string(A) + " <= k");
  return (A - k) / A;
}

}  // namespace teletraffic
