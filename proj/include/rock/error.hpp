#pragma once

#include <stdexcept>
#include <string>

namespace rock {

/// Failure classes surfaced by the library. The CLI maps each to an exit
/// code and prints the category name as the first token of the error line.
enum class ErrorCategory {
  InputDomain,
  Unsupported,
  Shape,
  Config,
  Interval,
  TrajectoryTooShort,
  NumericalConditioning,
  Divergence,
  GridTooSmall,
  Data,
  SearchFailure,
  Schema,
  Io,
};

const char* category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Raised by integrators and PDE forecasts when the state leaves the finite
/// range. `time` is the simulation time (or step index for PDE rollouts).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(ErrorCategory::Divergence, what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace rock
