#pragma once

#include <stdexcept>
#include <string>

namespace ddclock {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested problem size exceeds an explicit-mode cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Integrator failure or a violated physical invariant.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddclock
