#pragma once

#include <stdexcept>
#include <string>

namespace frmod {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (r0, r1) pair that no P-T bivariate long-memory series can attain.
class InfeasibleLimit : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Cyclical phase outside the admissible interval I_d.
class InadmissiblePhase : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation requested exactly at a spectral singularity.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// AR or MA polynomial with a root on or inside the unit disc.
class InvalidPolynomial : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical procedure did not reach its target accuracy.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericFailure {
 public:
  QuadratureFailure(const std::string& what, double estimate, double error)
      : NumericFailure(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

class NotPositiveDefinite : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

}  // namespace frmod
