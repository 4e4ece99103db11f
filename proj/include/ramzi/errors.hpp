#pragma once

#include <stdexcept>
#include <string>

namespace ramzi {

/// Root of every error the toolkit throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range parameter, malformed config, unknown key.
/// `key()` names the offending parameter (dotted config path when known).
class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Numerical failure: non-finite state, no convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A search found no admissible point (e.g. no coupling pair hits the Q).
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Thermal bias cannot be held: the requested operating point is inside a
/// bistable region or is an unstable equilibrium.
class InstabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ramzi
