#ifndef RIS_ERRORS_HPP
#define RIS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ris {

/// Invalid argument to a mathematical routine (out-of-domain parameter).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query or parameter outside the range covered by stored data.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A file could not be read or written; carries the OS message.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Base for failures of the adaptive numerical machinery. The CLI maps these
/// to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The relaxed initial event produced no hits.
class InitializationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// All importance weights of a level vanished.
class DegenerateLevelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The level cap was reached before the terminal relaxation value.
class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The failure-ratio model could not be fitted to the available points.
class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The ODE state became non-finite.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(std::size_t step, double time)
      : NumericalError("non-finite oscillator state at step " + std::to_string(step) +
                       " (t = " + std::to_string(time) + " s)"),
        step_(step),
        time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

}  // namespace ris

#endif  // RIS_ERRORS_HPP
