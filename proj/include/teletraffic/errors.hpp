#pragma once

#include <stdexcept>
#include <string>

namespace teletraffic {

// Exit codes used by the command-line front end.
enum class ExitCode : int { ok = 0, validation = 2, instability = 3, convergence = 4 };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const { return ExitCode::validation; }
};

// Bad or out-of-domain input.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Model has no steady state for the given loads (rho >= 1 and similar).
class InstabilityError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::instability; }
};

// Requested target cannot be met by any parameter value.
class InfeasibleError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::instability; }
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, long iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  ExitCode exit_code() const override { return ExitCode::convergence; }
  double residual() const { return residual_; }
  long iterations() const { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

// Singular linear systems, zero death rates at reachable states, etc.
class SingularityError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::instability; }
};

}  // namespace teletraffic
