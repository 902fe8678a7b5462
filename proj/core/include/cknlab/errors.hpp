#pragma once

#include <stdexcept>
#include <string>

namespace ckn {

/// Raised when an argument lies outside the domain of an operation
/// (bad exponent range, degenerate annulus, unknown family, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when adaptive refinement cannot reach the requested tolerance.
/// Carries the best estimate obtained at the finest level.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double err_estimate)
      : std::runtime_error(what), best_(best_estimate), err_(err_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double err_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

}  // namespace ckn
