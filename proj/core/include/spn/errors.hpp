// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid, spec or coordinate shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Total charge density has a nonzero mean where a neutral one is required.
class NeutralityError : public Error {
 public:
  NeutralityError(const std::string& what, double residual_charge)
      : Error(what), residual_charge_(residual_charge) {}
  double residual_charge() const noexcept { return residual_charge_; }

 private:
  double residual_charge_;
};

/// Ion density violates its defining constraints (positive total charge, realness).
class InvalidDensityError : public Error {
 public:
  using Error::Error;
};

/// Input data (density files, grids) could not be read or is malformed.
class InputDataError : public Error {
 public:
  using Error::Error;
};

/// A requested superposition of occupation sets breaks the two-orbital rule.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// The model refuses to build a ground state (e.g. the ion density is not jellium).
class ModelRefusal : public Error {
 public:
  ModelRefusal(const std::string& what, double diagnostic)
      : Error(what), diagnostic_(diagnostic) {}
  double diagnostic() const noexcept { return diagnostic_; }

 private:
  double diagnostic_;
};

/// Determinant basis larger than the configured budget.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t budget)
      : Error(what), budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

/// Implicit time step failed to converge.
class IntegratorError : public Error {
 public:
  IntegratorError(const std::string& what, std::size_t step, double time, double residual)
      : Error(what), step_(step), time_(time), residual_(residual) {}
  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t step_;
  double time_;
  double residual_;
};

/// Configuration text is missing keys or holds invalid values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace spn
