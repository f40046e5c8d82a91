#pragma once

#include <stdexcept>
#include <string>

namespace hccn {

/// Failure of a numeric kernel (non-convergent quadrature, inconsistent
/// Laplace inversion, ...). Carries the name of the module that failed so the
/// CLI can report it.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double best_estimate, double achieved_error)
      : NumericError("mathkit", what), best_estimate_(best_estimate), achieved_error_(achieved_error) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double best_estimate_;
  double achieved_error_;
};

class InversionError : public NumericError {
 public:
  InversionError(const std::string& what, double primary, double check)
      : NumericError("mathkit", what), primary_(primary), check_(check) {}

  double primary() const noexcept { return primary_; }
  double check() const noexcept { return check_; }

 private:
  double primary_;
  double check_;
};

/// Moment matching on a zero-variance input.
class DegenerateDistributionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown by the Monte Carlo engine when a deployment has no base station.
class NoServingBsError : public std::runtime_error {
 public:
  NoServingBsError() : std::runtime_error("no serving BS in deployment") {}
};

}  // namespace hccn
