#pragma once

#include <stdexcept>
#include <string>

namespace critflow {

/// Bad parameters: grid too coarse, exponent out of range, malformed config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates an operation's precondition (e.g. nonzero mean for
/// Biot-Savart inversion).
class InvalidInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query outside the region where an operation is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or a sum that refuses to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed snapshot or CSV input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace critflow
