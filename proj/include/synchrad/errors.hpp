#pragma once

#include <stdexcept>
#include <string>

namespace synchrad {

/// Argument outside the range an evaluator supports.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or adaptive procedure stopped before meeting its tolerance.
/// Carries the best available estimate so callers can decide whether to use it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace synchrad
