#pragma once

#include <stdexcept>
#include <string>

namespace srsp {

/// Base class for all library errors. Each category maps onto one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

/// Invalid parameters, grids, or configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Malformed snapshot or config file contents.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// NaN/Inf entering a public operation.
class NumericalInputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Operation undefined at the supplied input (zero field where a nonzero one is required).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// An iterative procedure produced non-finite values.
class NumericalFailure : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Minimization found evidence that the energy is unbounded below on the mass sphere.
class UnboundedDetected : public Error {
 public:
  UnboundedDetected(const std::string& what, double energy, int iteration)
      : Error(what), energy_(energy), iteration_(iteration) {}
  int exit_code() const noexcept override { return 4; }
  double energy() const noexcept { return energy_; }
  int iteration() const noexcept { return iteration_; }

 private:
  double energy_;
  int iteration_;
};

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int config_error = 2;
inline constexpr int numerical_failure = 3;
inline constexpr int unbounded = 4;
inline constexpr int verification_failed = 5;
}  // namespace exit_code

}  // namespace srsp
