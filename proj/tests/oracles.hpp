#pragma once

// Independent reference computations for the unit tests. Each one takes a
// different route from the library code it checks.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace oracle {

// Erlang B from the truncated Poisson sum in log space.
inline double erlang_b_sum(double A, int k) {
  std::vector<double> logt(static_cast<std::size_t>(k) + 1);
  double mx = -1e300;
  for (int i = 0; i <= k; ++i) {
    logt[static_cast<std::size_t>(i)] = i * std::log(A) - std::lgamma(i + 1.0);
    mx = std::max(mx, logt[static_cast<std::size_t>(i)]);
  }
  double s = 0.0;
  for (double l : logt) s += std::exp(l - mx);
  return std::exp(logt.back() - mx) / s;
}

// Erlang C from the M/M/k state sums.
inline double erlang_c_sum(double A, int k) {
  double term = 1.0, below = 0.0;
  for (int i = 0; i < k; ++i) {
    below += term;
    term *= A / (i + 1);
  }
  const double tail = term * k / (k - A);
  return tail / (below + tail);
}

// Dense stationary solve: replace the last balance equation by sum(pi) = 1
// and use a full-pivot LU.
inline std::vector<double> stationary(const Eigen::MatrixXd& Q) {
  const Eigen::Index n = Q.rows();
  Eigen::MatrixXd M = Q.transpose();
  M.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::VectorXd x = M.fullPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

// Birth-death generator with rates birth[i] (i -> i+1) and death[i] (i+1 -> i).
inline Eigen::MatrixXd bd_generator(const std::vector<double>& birth, const std::vector<double>& death) {
  const Eigen::Index n = static_cast<Eigen::Index>(birth.size()) + 1;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Q(i, i + 1) = birth[static_cast<std::size_t>(i)];
    Q(i + 1, i) = death[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < n; ++i) Q(i, i) = -Q.row(i).sum();
  return Q;
}

}  // namespace oracle
