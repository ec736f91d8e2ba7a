#include "rock/error.hpp"

namespace rock {

const char* category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InputDomain: return "input_domain";
    case ErrorCategory::Unsupported: return "unsupported";
    case ErrorCategory::Shape: return "shape";
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Interval: return "interval";
    case ErrorCategory::TrajectoryTooShort: return "trajectory_too_short";
    case ErrorCategory::NumericalConditioning: return "numerical_conditioning";
    case ErrorCategory::Divergence: return "divergence";
    case ErrorCategory::GridTooSmall: return "grid_too_small";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::SearchFailure: return "search_failure";
    case ErrorCategory::Schema: return "schema";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

}  // namespace rock
