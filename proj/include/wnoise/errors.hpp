#pragma once

#include <stdexcept>
#include <string>

namespace wnoise {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  ok = 0,
  config_error = 2,
  invariant_violation = 3,
  convergence_failure = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual ExitCode exit_code() const noexcept { return ExitCode::invariant_violation; }
};

/// Invalid configuration: bad key, malformed value, unsupported tag.
class ConfigError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::config_error; }
};

/// Precondition on an argument violated (dimension mismatch, index out of range, k too large).
class DomainError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::config_error; }
};

/// An exactly-checkable identity or bound failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver hit its step cap before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  [[nodiscard]] double best_residual() const noexcept { return best_residual_; }
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::convergence_failure; }

 private:
  double best_residual_;
};

/// The top of the spectrum is (numerically) degenerate, so the top eigenvector is ill-defined.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration would exceed its evaluation budget.
class BudgetError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace wnoise
