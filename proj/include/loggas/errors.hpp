#pragma once

#include <stdexcept>
#include <string>

namespace loggas {

// Argument outside the documented domain of an operation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative method (quadrature refinement, root finding, differencing)
// could not reach the requested tolerance. Carries the best estimate so
// callers can still report something.
class AccuracyFailure : public std::runtime_error {
 public:
  AccuracyFailure(const std::string& what, double best_estimate, double residual)
      : std::runtime_error(what), best_estimate_(best_estimate), residual_(residual) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

// Double precision cannot resolve the requested quantity, e.g. 1 - gamma is
// below the eigenvalue accuracy of the discretized kernel.
class PrecisionDomainError : public std::runtime_error {
 public:
  PrecisionDomainError(const std::string& what, double max_trustworthy_v)
      : std::runtime_error(what), max_trustworthy_v_(max_trustworthy_v) {}

  double max_trustworthy_v() const noexcept { return max_trustworthy_v_; }

 private:
  double max_trustworthy_v_;
};

// An asymptotic formula was requested outside the (s, v) region it covers.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A theta function in a denominator vanished.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

// A built-in identity failed at construction time. The message names it.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Nystrom spectrum left [0, 1] by more than rounding noise.
class DiscretizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested work exceeds the configured budget (node count, panel count).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loggas
