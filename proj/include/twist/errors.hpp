#pragma once
#include <stdexcept>
#include <string>

namespace twist {

// bad argument to a pure function (negative intensity, order beyond cap, ...)
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// invalid scenario or geometry
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// quadrature did not converge, resolution too coarse, ...
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, double best = 0.0)
      : std::runtime_error(what), best_estimate(best) {}
  double best_estimate;
};

}  // namespace twist
