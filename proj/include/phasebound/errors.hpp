#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phasebound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class DegenerateMeasurement : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Fock truncation discarded more probability than allowed.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_dim, double discarded_mass)
      : Error(what), suggested_dim_(suggested_dim), discarded_mass_(discarded_mass) {}

  int suggested_dim() const noexcept { return suggested_dim_; }
  double discarded_mass() const noexcept { return discarded_mass_; }

 private:
  int suggested_dim_;
  double discarded_mass_;
};

/// Minimizer hit its iteration cap; carries the best iterate seen.
class OptimizationFailure : public Error {
 public:
  OptimizationFailure(const std::string& what, std::vector<double> best_point, double best_value)
      : Error(what), best_point_(std::move(best_point)), best_value_(best_value) {}

  const std::vector<double>& best_point() const noexcept { return best_point_; }
  double best_value() const noexcept { return best_value_; }

 private:
  std::vector<double> best_point_;
  double best_value_;
};

/// Quadrature exhausted its subdivision budget before meeting the tolerance.
class AccuracyFailure : public Error {
 public:
  AccuracyFailure(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace phasebound
