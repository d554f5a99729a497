#pragma once

#include <stdexcept>
#include <string>

namespace wavemotion {

/// Bad configuration or arguments (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A required upstream artifact is missing (CLI exit code 4).
struct MissingDependencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure: divergence, non-convergence, non-finite state
/// (CLI exit code 5).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wavemotion
