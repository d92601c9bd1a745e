#pragma once

#include <stdexcept>
#include <string>

namespace rothaff {

// Raised when an operation is applied outside its mathematical domain
// (division by zero, evaluation at a pole, violated hypotheses, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of evaluations before reaching its tolerance.
class QuadratureError : public DomainError {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : DomainError(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Malformed textual input (polynomials, set documents, tables).
class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace rothaff
