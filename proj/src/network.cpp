#include "teletraffic/network.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"

namespace teletraffic {

void JacksonSpec::validate() const {
  const std::size_t n = external_rates.size();
  if (n == 0) throw ParameterError("network has no queues");
  if (service_rates.size() != n || routing.size() != n) throw ParameterError("queue count mismatch between rates and routing matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(external_rates[i] >= 0.0)) throw ParameterError("external rates must be non-negative");
    if (!(service_rates[i] > 0.0)) throw ParameterError("service rates must be positive");
    if (routing[i].size() != n) throw ParameterError("routing matrix must be square");
    double row = 0.0;
    for (double p : routing[i]) {
      if (!(p >= 0.0)) throw ParameterError("routing probabilities must be non-negative");
      row += p;
    }
    if (row > 1.0 + 1e-12) throw ParameterError("routing row " + std::to_string(i + 1) + " sums above 1");
  }
}

JacksonResult jackson_solve(const JacksonSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.external_rates.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i) = spec.external_rates[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) M(j, i) -= spec.routing[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw SingularityError("traffic equations are singular: some queues have no exit path");
  const Eigen::VectorXd lam = lu.solve(r);
  JacksonResult out;
  double total_r = 0.0;
  out.mean_population = 0.0;
  out.prob_all_empty = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double l = std::max(0.0, lam(j));
    const double mu = spec.service_rates[static_cast<std::size_t>(j)];
    out.arrival_rates.push_back(l);
    out.utilization.push_back(l / mu);
    if (l >= mu) {
      std::ostringstream msg;
      msg << "queue " << (j + 1) << " unstable: rho = " << l / mu;
      throw InstabilityError(msg.str());
    }
    out.queues.push_back(mm1_metrics(l, mu));
    out.mean_population += out.queues.back().mean_queue;
    out.prob_all_empty *= 1.0 - l / mu;
    total_r += spec.external_rates[static_cast<std::size_t>(j)];
  }
  if (!(total_r > 0.0)) throw ParameterError("network has no external arrivals");
  out.network_mean_delay = out.mean_population / total_r;
  return out;
}

void CircuitNetworkSpec::validate() const {
  for (const auto& l : links)
    if (l.capacity < 0) throw ParameterError("link " + l.id + " has negative capacity");
  for (const auto& r : routes) {
    if (!(r.offered >= 0.0)) throw ParameterError("route offered load must be non-negative");
    if (r.links.empty()) throw ParameterError("route with no links");
    for (std::size_t j : r.links)
      if (j >= links.size()) throw ParameterError("route references unknown link");
  }
}

EfpaResult efpa_solve(const CircuitNetworkSpec& spec, const EfpaOptions& opt) {
  spec.validate();
  if (!(opt.tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw ParameterError("damping must be in (0,1]");
  const std::size_t L = spec.links.size();
  std::vector<double> B(L, 0.0), a(L, 0.0), next(L);
  double change = 0.0;
  std::vector<double> history;
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::fill(a.begin(), a.end(), 0.0);
    for (const auto& route : spec.routes) {
      for (std::size_t pos = 0; pos < route.links.size(); ++pos) {
        double thin = route.offered;
        for (std::size_t other = 0; other < route.links.size(); ++other)
          if (other != pos) thin *= 1.0 - B[route.links[other]];
        a[route.links[pos]] += thin;
      }
    }
    change = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      next[j] = (1.0 - opt.damping) * B[j] + opt.damping * erlang_b(a[j], spec.links[j].capacity);
      change = std::max(change, std::abs(next[j] - B[j]));
    }
    B.swap(next);
    history.push_back(change);
    if (change < opt.tol) {
      EfpaResult res{B, a, {}, it, change};
      for (const auto& route : spec.routes) {
        double pass = 1.0;
        for (std::size_t j : route.links) pass *= 1.0 - B[j];
        res.route_blocking.push_back(1.0 - pass);
      }
      return res;
    }
  }
  std::ostringstream msg;
  msg << "reduced-load fixed point did not converge; last changes:";
  for (std::size_t i = history.size() >= 4 ? history.size() - 4 : 0; i < history.size(); ++i) msg << ' ' << history[i];
  msg << " (try damping < 1)";
  throw ConvergenceError(msg.str(), change, opt.max_iter);
}

OpticalParams convert_params(double r, double b, double c, double U) {
  if (!(r > 0.0) || !(b > 0.0) || !(c > 0.0)) throw ParameterError("rates and burst size must be positive");
  if (!(U > 0.0 && U <= 1.0)) throw ParameterError("utilisation U must be in (0,1]");
  return {r / b, b / (c * U), r / (c * U)};
}

}  // namespace teletraffic
